# Two formulations of the largest stable set on a five-node graph.
#
# The first uses one row per edge. The second doubles the objective and adds
# clique cuts, so the optimal values differ and the constraint matrices have
# different shapes. A mapping still sends every optimum of the second to an
# optimum of the first.

from pathlib import Path
import json

from formeq import PairContext, load_formulation
from formeq.checkers import brute_force, equivamap_check, execution_check, ground_truth_finder, wl_check
from formeq.instantiate import InstanceData
from formeq.mapping import parse_mapping_json

here = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "stable_pair"
alpha = load_formulation((here / "alpha.json").read_text())
alpha_prime = load_formulation((here / "alpha_prime.json").read_text())
shapes = {n: p.shape for f in (alpha, alpha_prime) for n, p in f.parameters.items()}
data = InstanceData.from_dict(json.loads((here / "instance.json").read_text()), shapes=shapes)

ctx = PairContext(alpha, alpha_prime, data)
print("alpha  :", ctx.alpha_model.n_cols, "columns,", ctx.alpha_model.n_rows, "rows, z* =", ctx.alpha_outcome.objective)
print("alpha' :", ctx.alpha_prime_model.n_cols, "columns,", ctx.alpha_prime_model.n_rows, "rows, z* =",
      ctx.alpha_prime_outcome.objective)


# The objective-value baseline and the WL test both call the pair different.

print("execution:", execution_check(ctx).decision)
print("wl       :", wl_check(ctx).decision)


# Writing the mapping by hand: x[i] = y[i].

mapping = parse_mapping_json(json.dumps({"x": [{"constant": 1, "variable": "y"}]}))
v = equivamap_check(ctx, ground_truth_finder(mapping))
print("equivamap with x = y:", v.decision)

# A wrong guess fails verification and reports why.
bad = parse_mapping_json(json.dumps({"x": [{"constant": 2, "variable": "y"}]}))
v = equivamap_check(ctx, ground_truth_finder(bad))
print("equivamap with x = 2y:", v.decision, "-", v.reason)


# The brute-force finder recovers the identity without help.

v = equivamap_check(ctx, brute_force())
print("brute-force finder:", v.decision, v.mapping.render())
