# The accuracy table over the bundled seed corpus, then an offline LLM run.
#
# No network is needed: a stand-in model answers mapping prompts from the
# ground truth, its exchanges are recorded, and the recording is replayed.

import json
import tempfile
from pathlib import Path

from formeq.bench import run_benchmark
from formeq.llm import LlmConfig, RecordingTransport, ReplayTransport
from formeq.mapping import Mapping, mapping_to_json
from formeq.transform import build_dataset, load_corpus

dataset = build_dataset(load_corpus(), seed=0)
print(len(dataset[1]), "records")

report = run_benchmark(dataset, ["canonical", "execution", "wl", "equivamap"], finder="ground-truth")
print(report.render_table())


# In[1]:

# A fake model that knows the answer for each pair id, or says "none".

answers = {r.id: r.ground_truth_mapping for r in dataset[1]}


class Oracle:
    def complete(self, prompt, *, pair_id, attempt):
        truth = answers[pair_id]
        target = prompt.split("for the variable '", 1)[1].split("'", 1)[0]
        return mapping_to_json(Mapping({target: None if truth is None else truth.entries[target]}))


tmp = Path(tempfile.mkdtemp())
cfg = LlmConfig(k=1)
live = run_benchmark(dataset, ["equivamap"], finder="llm", llm_cfg=cfg,
                     transport=RecordingTransport(Oracle(), tmp / "transcript.jsonl"))
replayed = run_benchmark(dataset, ["equivamap"], finder="llm", llm_cfg=cfg,
                         transport=ReplayTransport(tmp / "transcript.jsonl"))
same = json.dumps(live.to_dict()) == json.dumps(replayed.to_dict())
print("recorded", sum(1 for _ in open(tmp / "transcript.jsonl")), "exchanges; replay identical:", same)
print(replayed.render_timings())
