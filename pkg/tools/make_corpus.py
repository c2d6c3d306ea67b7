"""Write the bundled seed corpus (src/formeq/data/corpus)."""
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "src" / "formeq" / "data" / "corpus"


def P(desc, shape=()):
    return {"description": desc, "shape": list(shape)}


def V(desc, type_="continuous", shape=(), lower=0, upper=None):
    out = {"description": desc, "type": type_, "shape": list(shape)}
    if type_ != "binary":
        out["lower"], out["upper"] = lower, upper
    return out


def C(desc, text, forall=None):
    out = {"description": desc, "formulation": text}
    if forall:
        out["forall"] = forall
    return out


def objective_decl(desc, sense, text):
    return {"description": desc, "sense": sense, "formulation": text}


CORPUS = {}

CORPUS["knapsack"] = (
    {
        "description": "A hiker packs a subset of Items into a bag. Item i is worth Value[i] and weighs Weight[i]; the bag holds at most Capacity. Maximize the packed value.",
        "parameters": {"Value": P("Value of each item", ["Items"]), "Weight": P("Weight of each item", ["Items"]), "Capacity": P("Weight limit of the bag")},
        "sets": {"Items": {"description": "Candidate items"}},
        "variables": {"Take": V("Whether each item is packed", "binary", ["Items"])},
        "constraints": [C("The packed weight cannot exceed Capacity.", "sum(i in Items, Weight[i]*Take[i]) <= Capacity")],
        "objective": objective_decl("Maximize the total value of packed items.", "max", "sum(i in Items, Value[i]*Take[i])"),
    },
    {"sets": {"Items": ["tent", "stove", "rope", "lamp", "food", "map"]},
     "parameters": {"Value": [10, 13, 7, 8, 12, 5], "Weight": [5, 7, 3, 4, 6, 2], "Capacity": 15}},
)

CORPUS["stable_set"] = (
    {
        "description": "Choose a set of Nodes of a graph, no two joined by an edge, with the largest total Weight.",
        "parameters": {"Incidence": P("1 if the node is an endpoint of the edge", ["Edges", "Nodes"]), "Weight": P("Weight of each node", ["Nodes"])},
        "sets": {"Nodes": {"description": "Graph nodes"}, "Edges": {"description": "Graph edges"}},
        "variables": {"Pick": V("Whether each node is chosen", "binary", ["Nodes"])},
        "constraints": [C("At most one endpoint of each edge is chosen.", "sum(v in Nodes, Incidence[e,v]*Pick[v]) <= 1", [["e", "Edges"]])],
        "objective": objective_decl("Maximize the weight of the chosen nodes.", "max", "sum(v in Nodes, Weight[v]*Pick[v])"),
    },
    {"sets": {"Nodes": ["1", "2", "3", "4", "5"], "Edges": ["a", "b", "c", "d"]},
     "parameters": {"Incidence": [[1, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 1]], "Weight": [3, 2, 4, 1, 5]}},
)

CORPUS["laundromat"] = (
    {
        "description": "A laundromat buys top-loading and front-loading washing machines. A top-loading machine washes WashRateTopLoading items per day and uses EnergyConsumptionTopLoading kWh; a front-loading machine washes WashRateFrontLoading items and uses EnergyConsumptionFrontLoading kWh. At least MinItemsPerDay items must be washed, at most MaxEnergyPerDay kWh is available, at most MaxFractionTopLoading of the machines can be top-loading and at least MinNumFrontLoading must be front-loading. Minimize the number of machines.",
        "parameters": {
            "WashRateTopLoading": P("Number of items washed per day by a top-loading machine"),
            "WashRateFrontLoading": P("Number of items washed per day by a front-loading machine"),
            "EnergyConsumptionTopLoading": P("Energy consumed per day by a top-loading machine (kWh)"),
            "EnergyConsumptionFrontLoading": P("Energy consumed per day by a front-loading machine (kWh)"),
            "MinItemsPerDay": P("Minimum number of items to wash per day"),
            "MaxEnergyPerDay": P("Maximum available energy per day (kWh)"),
            "MaxFractionTopLoading": P("Maximum fraction of machines that can be top-loading"),
            "MinNumFrontLoading": P("Minimum number of front-loading machines"),
        },
        "variables": {
            "NumTopLoading": V("The number of top-loading machines", "integer", upper=200),
            "NumFrontLoading": V("The number of front-loading machines", "integer", upper=200),
        },
        "constraints": [
            C("The total number of items washed per day must be at least MinItemsPerDay.", "WashRateTopLoading * NumTopLoading + WashRateFrontLoading * NumFrontLoading >= MinItemsPerDay"),
            C("The total energy consumption per day cannot exceed MaxEnergyPerDay kWh.", "EnergyConsumptionTopLoading * NumTopLoading + EnergyConsumptionFrontLoading * NumFrontLoading <= MaxEnergyPerDay"),
            C("At most MaxFractionTopLoading of the machines can be top-loading.", "NumTopLoading <= MaxFractionTopLoading * (NumTopLoading + NumFrontLoading)"),
            C("At least MinNumFrontLoading machines must be front-loading.", "NumFrontLoading >= MinNumFrontLoading"),
        ],
        "objective": objective_decl("Minimize the total number of washing machines purchased.", "min", "NumTopLoading + NumFrontLoading"),
    },
    {"sets": {}, "parameters": {"WashRateTopLoading": 50, "WashRateFrontLoading": 75, "EnergyConsumptionTopLoading": 85,
                                "EnergyConsumptionFrontLoading": 100, "MinItemsPerDay": 5010, "MaxEnergyPerDay": 7000,
                                "MaxFractionTopLoading": 0.4, "MinNumFrontLoading": 10}},
)

CORPUS["production"] = (
    {
        "description": "A plant makes Products using Resources. Each unit of product p earns Profit[p] and uses Usage[r,p] of resource r, of which Available[r] is on hand. At most Demand[p] units of each product can be sold. Maximize profit.",
        "parameters": {"Profit": P("Profit per unit of each product", ["Products"]), "Usage": P("Resource use per unit of product", ["Resources", "Products"]),
                       "Available": P("Amount available of each resource", ["Resources"]), "Demand": P("Maximum sales of each product", ["Products"])},
        "sets": {"Products": {"description": "Products made"}, "Resources": {"description": "Limited resources"}},
        "variables": {"Make": V("Units of each product made", shape=["Products"])},
        "constraints": [
            C("Resource use cannot exceed the available amount.", "sum(p in Products, Usage[r,p]*Make[p]) <= Available[r]", [["r", "Resources"]]),
            C("Production of each product cannot exceed its demand.", "Make[p] <= Demand[p]", [["p", "Products"]]),
        ],
        "objective": objective_decl("Maximize total profit.", "max", "sum(p in Products, Profit[p]*Make[p])"),
    },
    {"sets": {"Products": ["chairs", "desks", "shelves"], "Resources": ["wood", "labor"]},
     "parameters": {"Profit": [20, 31, 24], "Usage": [[2, 3, 1], [1, 2, 3]], "Available": [100, 120], "Demand": [30, 20, 25]}},
)

CORPUS["diet"] = (
    {
        "description": "Choose amounts of Foods so that each of the Nutrients meets its requirement Requirement[n] at the least cost. Food f costs Cost[f] per serving and provides Content[n,f] of nutrient n.",
        "parameters": {"Cost": P("Cost per serving of each food", ["Foods"]), "Content": P("Nutrient content per serving", ["Nutrients", "Foods"]),
                       "Requirement": P("Minimum daily amount of each nutrient", ["Nutrients"])},
        "sets": {"Foods": {"description": "Available foods"}, "Nutrients": {"description": "Tracked nutrients"}},
        "variables": {"Servings": V("Servings of each food per day", shape=["Foods"])},
        "constraints": [C("Each nutrient requirement must be met.", "sum(f in Foods, Content[n,f]*Servings[f]) >= Requirement[n]", [["n", "Nutrients"]])],
        "objective": objective_decl("Minimize the daily food cost.", "min", "sum(f in Foods, Cost[f]*Servings[f])"),
    },
    {"sets": {"Foods": ["bread", "milk", "cheese", "potato"], "Nutrients": ["calories", "protein", "calcium"]},
     "parameters": {"Cost": [2, 3.5, 8, 1.5], "Content": [[110, 160, 420, 70], [4, 8, 25, 2], [2, 30, 60, 1]], "Requirement": [2000, 55, 80]}},
)

CORPUS["transport"] = (
    {
        "description": "Ship goods from Sources with Supply[s] to Destinations with Demand[d]; moving one unit from s to d costs Cost[s,d]. Minimize shipping cost.",
        "parameters": {"Supply": P("Units available at each source", ["Sources"]), "Demand": P("Units required at each destination", ["Destinations"]),
                       "Cost": P("Unit shipping cost", ["Sources", "Destinations"])},
        "sets": {"Sources": {"description": "Supply points"}, "Destinations": {"description": "Demand points"}},
        "variables": {"Ship": V("Units shipped on each route", shape=["Sources", "Destinations"])},
        "constraints": [
            C("Shipments from a source cannot exceed its supply.", "sum(d in Destinations, Ship[s,d]) <= Supply[s]", [["s", "Sources"]]),
            C("Each destination must receive its demand.", "sum(s in Sources, Ship[s,d]) >= Demand[d]", [["d", "Destinations"]]),
        ],
        "objective": objective_decl("Minimize the total shipping cost.", "min", "sum(s in Sources, sum(d in Destinations, Cost[s,d]*Ship[s,d]))"),
    },
    {"sets": {"Sources": ["north", "south"], "Destinations": ["x", "y", "z"]},
     "parameters": {"Supply": [60, 50], "Demand": [30, 40, 25], "Cost": [[4, 6, 9], [5, 3, 7]]}},
)

CORPUS["investment"] = (
    {
        "description": "An investor splits at most Budget dollars among bonds, stocks and real estate with yearly returns BondReturn, StockReturn and EstateReturn. At most StockShare of the budget may go to stocks, at least MinBonds dollars must go to bonds, and real estate cannot exceed bonds. Maximize the yearly return.",
        "parameters": {"Budget": P("Total money available"), "BondReturn": P("Yearly return rate of bonds"), "StockReturn": P("Yearly return rate of stocks"),
                       "EstateReturn": P("Yearly return rate of real estate"), "StockShare": P("Maximum fraction of the budget in stocks"),
                       "MinBonds": P("Minimum amount placed in bonds")},
        "variables": {"Bonds": V("Dollars placed in bonds"), "Stocks": V("Dollars placed in stocks"), "Estate": V("Dollars placed in real estate")},
        "constraints": [
            C("Total investment cannot exceed Budget.", "Bonds + Stocks + Estate <= Budget"),
            C("Stocks cannot exceed StockShare of the budget.", "Stocks <= StockShare * Budget"),
            C("Bonds must be at least MinBonds.", "Bonds >= MinBonds"),
            C("Real estate cannot exceed bonds.", "Estate <= Bonds"),
        ],
        "objective": objective_decl("Maximize the yearly return.", "max", "BondReturn*Bonds + StockReturn*Stocks + EstateReturn*Estate"),
    },
    {"sets": {}, "parameters": {"Budget": 100000, "BondReturn": 0.04, "StockReturn": 0.09, "EstateReturn": 0.06, "StockShare": 0.3, "MinBonds": 20000}},
)

CORPUS["blending"] = (
    {
        "description": "A refinery blends light and heavy crude into fuel. Light crude costs LightCost per barrel and has LightSulfur sulfur; heavy crude costs HeavyCost and has HeavySulfur. At least FuelNeeded barrels are needed, the blend sulfur cannot exceed SulfurLimit on average, and at most HeavyAvailable barrels of heavy crude exist. Minimize cost.",
        "parameters": {"LightCost": P("Cost per barrel of light crude"), "HeavyCost": P("Cost per barrel of heavy crude"), "LightSulfur": P("Sulfur fraction of light crude"),
                       "HeavySulfur": P("Sulfur fraction of heavy crude"), "FuelNeeded": P("Barrels of fuel required"), "SulfurLimit": P("Maximum average sulfur fraction"),
                       "HeavyAvailable": P("Barrels of heavy crude available")},
        "variables": {"Light": V("Barrels of light crude used"), "Heavy": V("Barrels of heavy crude used")},
        "constraints": [
            C("At least FuelNeeded barrels must be produced.", "Light + Heavy >= FuelNeeded"),
            C("Average sulfur cannot exceed SulfurLimit.", "LightSulfur*Light + HeavySulfur*Heavy <= SulfurLimit*(Light + Heavy)"),
            C("Heavy crude use cannot exceed HeavyAvailable.", "Heavy <= HeavyAvailable"),
        ],
        "objective": objective_decl("Minimize the crude purchase cost.", "min", "LightCost*Light + HeavyCost*Heavy"),
    },
    {"sets": {}, "parameters": {"LightCost": 80, "HeavyCost": 55, "LightSulfur": 0.01, "HeavySulfur": 0.04, "FuelNeeded": 1000, "SulfurLimit": 0.025, "HeavyAvailable": 800}},
)

CORPUS["staffing"] = (
    {
        "description": "A call center staffs overlapping Shifts; Covers[t,s] is 1 when shift s works in period t. Period t needs Need[t] agents and an agent on shift s costs Wage[s]. Minimize the wage bill.",
        "parameters": {"Covers": P("1 if the shift works during the period", ["Periods", "Shifts"]), "Need": P("Agents needed in each period", ["Periods"]),
                       "Wage": P("Cost of one agent on each shift", ["Shifts"])},
        "sets": {"Periods": {"description": "Time periods of the day"}, "Shifts": {"description": "Available shifts"}},
        "variables": {"Agents": V("Agents assigned to each shift", "integer", ["Shifts"], 0, 50)},
        "constraints": [C("Each period must have at least Need agents on duty.", "sum(s in Shifts, Covers[t,s]*Agents[s]) >= Need[t]", [["t", "Periods"]])],
        "objective": objective_decl("Minimize the total wage cost.", "min", "sum(s in Shifts, Wage[s]*Agents[s])"),
    },
    {"sets": {"Periods": ["morning", "midday", "afternoon", "evening"], "Shifts": ["early", "day", "late", "split"]},
     "parameters": {"Covers": [[1, 0, 0, 1], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], "Need": [7, 12, 9, 5], "Wage": [95, 100, 105, 120]}},
)

CORPUS["cleaning"] = (
    {
        "description": "A cleaning company uses a cleansing chemical and an odor-removing chemical. A unit of cleansing chemical takes CleansingChemicalTime minutes to act and a unit of odor-removing chemical takes OdorRemovingChemicalTime minutes. At least MinCleansingUnits units of cleansing chemical are needed, at most MaxTotalUnits units may be used in total, and cleansing chemical cannot exceed MaxCleansingToOdorRatio times the odor-removing chemical. Minimize total time.",
        "parameters": {"CleansingChemicalTime": P("Minutes for one unit of cleansing chemical"), "OdorRemovingChemicalTime": P("Minutes for one unit of odor-removing chemical"),
                       "MinCleansingUnits": P("Minimum units of cleansing chemical"), "MaxTotalUnits": P("Maximum total chemical units"),
                       "MaxCleansingToOdorRatio": P("Maximum ratio of cleansing to odor-removing units")},
        "variables": {"CleansingChemicalUnits": V("The number of units of cleansing chemical used per house", "integer", upper=999),
                      "OdorRemovingChemicalUnits": V("The number of units of odor-removing chemical used per house", "integer", upper=99)},
        "constraints": [
            C("The company must use at least MinCleansingUnits of the cleansing chemical per house.", "CleansingChemicalUnits >= MinCleansingUnits"),
            C("The total number of chemical units used per house cannot exceed MaxTotalUnits.", "CleansingChemicalUnits + OdorRemovingChemicalUnits <= MaxTotalUnits"),
            C("Cleansing units cannot exceed MaxCleansingToOdorRatio times odor-removing units.", "CleansingChemicalUnits <= MaxCleansingToOdorRatio * OdorRemovingChemicalUnits"),
        ],
        "objective": objective_decl("Minimize the total time taken to clean the house.", "min", "CleansingChemicalTime*CleansingChemicalUnits + OdorRemovingChemicalTime*OdorRemovingChemicalUnits"),
    },
    {"sets": {}, "parameters": {"CleansingChemicalTime": 4, "OdorRemovingChemicalTime": 5, "MinCleansingUnits": 100, "MaxTotalUnits": 300, "MaxCleansingToOdorRatio": 3}},
)

CORPUS["bakery"] = (
    {
        "description": "A bakery makes loaves and cakes. A loaf needs LoafOven oven minutes and LoafFlour kg of flour and earns LoafProfit; a cake needs CakeOven minutes and CakeFlour kg and earns CakeProfit. OvenMinutes of oven time and Flour kg of flour are available, and at least MinCakes cakes must be made. Maximize profit.",
        "parameters": {"LoafOven": P("Oven minutes per loaf"), "CakeOven": P("Oven minutes per cake"), "LoafFlour": P("Flour per loaf (kg)"), "CakeFlour": P("Flour per cake (kg)"),
                       "LoafProfit": P("Profit per loaf"), "CakeProfit": P("Profit per cake"), "OvenMinutes": P("Oven minutes available"), "Flour": P("Flour available (kg)"),
                       "MinCakes": P("Minimum number of cakes")},
        "variables": {"Loaves": V("Number of loaves baked", "integer", upper=500), "Cakes": V("Number of cakes baked", "integer", upper=200)},
        "constraints": [
            C("Oven time used cannot exceed OvenMinutes.", "LoafOven*Loaves + CakeOven*Cakes <= OvenMinutes"),
            C("Flour used cannot exceed Flour.", "LoafFlour*Loaves + CakeFlour*Cakes <= Flour"),
            C("At least MinCakes cakes must be baked.", "Cakes >= MinCakes"),
        ],
        "objective": objective_decl("Maximize the daily profit.", "max", "LoafProfit*Loaves + CakeProfit*Cakes"),
    },
    {"sets": {}, "parameters": {"LoafOven": 20, "CakeOven": 45, "LoafFlour": 0.5, "CakeFlour": 0.3, "LoafProfit": 3, "CakeProfit": 7,
                                "OvenMinutes": 3000, "Flour": 52, "MinCakes": 10}},
)

CORPUS["farm"] = (
    {
        "description": "A farmer plants wheat and corn on at most Land acres and hires workers. An acre of wheat needs WheatHours labor hours and earns WheatProfit; an acre of corn needs CornHours and earns CornProfit. Each hired worker supplies HoursPerWorker hours and costs Wage. Maximize profit after wages.",
        "parameters": {"Land": P("Acres available"), "WheatHours": P("Labor hours per acre of wheat"), "CornHours": P("Labor hours per acre of corn"),
                       "WheatProfit": P("Profit per acre of wheat"), "CornProfit": P("Profit per acre of corn"), "HoursPerWorker": P("Hours supplied by one worker"),
                       "Wage": P("Cost of one worker")},
        "variables": {"Wheat": V("Acres of wheat planted"), "Corn": V("Acres of corn planted"), "Workers": V("Number of workers hired", "integer", upper=30)},
        "constraints": [
            C("Planted area cannot exceed Land.", "Wheat + Corn <= Land"),
            C("Labor needed cannot exceed the hours supplied by hired workers.", "WheatHours*Wheat + CornHours*Corn <= HoursPerWorker*Workers"),
        ],
        "objective": objective_decl("Maximize profit after wages.", "max", "WheatProfit*Wheat + CornProfit*Corn - Wage*Workers"),
    },
    {"sets": {}, "parameters": {"Land": 120, "WheatHours": 6, "CornHours": 10, "WheatProfit": 210, "CornProfit": 330, "HoursPerWorker": 160, "Wage": 2500}},
)

CORPUS["fleet"] = (
    {
        "description": "A courier rents trucks and vans. A truck carries TruckCapacity parcels per day and costs TruckCost; a van carries VanCapacity and costs VanCost. At least Parcels parcels must be moved, only Drivers drivers exist, and at most MaxTrucks trucks fit in the depot. Minimize rental cost.",
        "parameters": {"TruckCapacity": P("Parcels per truck per day"), "VanCapacity": P("Parcels per van per day"), "TruckCost": P("Daily cost of a truck"),
                       "VanCost": P("Daily cost of a van"), "Parcels": P("Parcels to move per day"), "Drivers": P("Drivers available"), "MaxTrucks": P("Depot truck limit"),
                       "OutsourceCost": P("Cost per parcel handed to a partner courier"), "MaxOutsource": P("Most parcels the partner accepts")},
        "variables": {"Trucks": V("Trucks rented", "integer", upper=40), "Vans": V("Vans rented", "integer", upper=40),
                      "Outsourced": V("Parcels handed to the partner courier", upper=None)},
        "constraints": [
            C("Own capacity plus outsourced parcels must cover at least Parcels parcels.", "TruckCapacity*Trucks + VanCapacity*Vans + Outsourced >= Parcels"),
            C("At most MaxOutsource parcels can be outsourced.", "Outsourced <= MaxOutsource"),
            C("Each vehicle needs a driver; at most Drivers are available.", "Trucks + Vans <= Drivers"),
            C("At most MaxTrucks trucks can be rented.", "Trucks <= MaxTrucks"),
        ],
        "objective": objective_decl("Minimize the daily rental and outsourcing cost.", "min", "TruckCost*Trucks + VanCost*Vans + OutsourceCost*Outsourced"),
    },
    {"sets": {}, "parameters": {"TruckCapacity": 120, "VanCapacity": 45, "TruckCost": 310, "VanCost": 125, "Parcels": 1500, "Drivers": 25, "MaxTrucks": 9, "OutsourceCost": 2.9, "MaxOutsource": 100}},
)

CORPUS["furniture"] = (
    {
        "description": "A workshop builds chairs and tables. A chair uses ChairWood board feet and ChairLabor hours and earns ChairProfit; a table uses TableWood and TableLabor and earns TableProfit. Wood and Labor are limited and at least MinTables tables are ordered. Maximize profit.",
        "parameters": {"ChairWood": P("Wood per chair"), "TableWood": P("Wood per table"), "ChairLabor": P("Labor hours per chair"), "TableLabor": P("Labor hours per table"),
                       "ChairProfit": P("Profit per chair"), "TableProfit": P("Profit per table"), "Wood": P("Wood available"), "Labor": P("Labor hours available"),
                       "MinTables": P("Tables ordered")},
        "variables": {"Chairs": V("Chairs built", "integer", upper=100), "Tables": V("Tables built", "integer", upper=100)},
        "constraints": [
            C("Wood used cannot exceed Wood.", "ChairWood*Chairs + TableWood*Tables <= Wood"),
            C("Labor used cannot exceed Labor.", "ChairLabor*Chairs + TableLabor*Tables <= Labor"),
            C("At least MinTables tables must be built.", "Tables >= MinTables"),
        ],
        "objective": objective_decl("Maximize total profit.", "max", "ChairProfit*Chairs + TableProfit*Tables"),
    },
    {"sets": {}, "parameters": {"ChairWood": 5, "TableWood": 20, "ChairLabor": 3, "TableLabor": 7, "ChairProfit": 45, "TableProfit": 160, "Wood": 400, "Labor": 170, "MinTables": 4}},
)

CORPUS["advertising"] = (
    {
        "description": "A campaign buys TV, radio and newspaper ads. Each ad of a type reaches Reach[m] people and costs Price[m]; at most Budget can be spent, at most MaxAds[m] ads of each type are available, and radio ads cannot exceed RadioRatio times TV ads. Maximize reach.",
        "parameters": {"Reach": P("People reached per ad", ["Media"]), "Price": P("Cost per ad", ["Media"]), "Budget": P("Advertising budget"),
                       "MaxAds": P("Ads available of each type", ["Media"]), "RadioRatio": P("Maximum radio ads per TV ad"),
                       "OnlineReach": P("People reached per dollar of online advertising"), "MaxOnline": P("Maximum online spend")},
        "sets": {"Media": {"description": "Advertising channels"}},
        "variables": {"Ads": V("Ads bought of each type", "integer", ["Media"], 0, 60), "Online": V("Dollars spent on online advertising")},
        "constraints": [
            C("Spending cannot exceed Budget.", "sum(m in Media, Price[m]*Ads[m]) + Online <= Budget"),
            C("Online spending cannot exceed MaxOnline.", "Online <= MaxOnline"),
            C("Ads of each type cannot exceed what is available.", "Ads[m] <= MaxAds[m]", [["m", "Media"]]),
            C("Radio ads cannot exceed RadioRatio times TV ads.", "Ads['radio'] <= RadioRatio*Ads['tv']"),
        ],
        "objective": objective_decl("Maximize the audience reached.", "max", "sum(m in Media, Reach[m]*Ads[m]) + OnlineReach*Online"),
    },
    {"sets": {"Media": ["tv", "radio", "paper"]},
     "parameters": {"Reach": [9000, 2500, 1800], "Price": [1500, 400, 350], "Budget": 20000, "MaxAds": [10, 40, 25], "RadioRatio": 3, "OnlineReach": 6.5, "MaxOnline": 3000}},
)

CORPUS["pharmacy"] = (
    {
        "description": "A pharmacy mixes batches of two formulas. A batch of formula A yields AYieldX units of ingredient X and AYieldY of Y and costs ACost; a batch of formula B yields BYieldX and BYieldY and costs BCost. At least NeedX units of X and NeedY of Y are needed and at most MaxBatches batches can be run. Minimize cost.",
        "parameters": {"AYieldX": P("Units of X per batch of A"), "AYieldY": P("Units of Y per batch of A"), "BYieldX": P("Units of X per batch of B"),
                       "BYieldY": P("Units of Y per batch of B"), "ACost": P("Cost per batch of A"), "BCost": P("Cost per batch of B"), "NeedX": P("Units of X needed"),
                       "NeedY": P("Units of Y needed"), "MaxBatches": P("Maximum number of batches"),
                       "XPrice": P("Price per unit of X bought from a wholesaler")},
        "variables": {"BatchesA": V("Batches of formula A", "integer", upper=60), "BatchesB": V("Batches of formula B", "integer", upper=60),
                      "BoughtX": V("Units of X bought from a wholesaler")},
        "constraints": [
            C("Produced plus bought X must reach NeedX units.", "AYieldX*BatchesA + BYieldX*BatchesB + BoughtX >= NeedX"),
            C("At least NeedY units of Y must be produced.", "AYieldY*BatchesA + BYieldY*BatchesB >= NeedY"),
            C("At most MaxBatches batches can be run.", "BatchesA + BatchesB <= MaxBatches"),
        ],
        "objective": objective_decl("Minimize the production and purchase cost.", "min", "ACost*BatchesA + BCost*BatchesB + XPrice*BoughtX"),
    },
    {"sets": {}, "parameters": {"AYieldX": 8, "AYieldY": 3, "BYieldX": 4, "BYieldY": 6, "ACost": 52, "BCost": 47, "NeedX": 180, "NeedY": 130, "MaxBatches": 50, "XPrice": 7.5}},
)

CORPUS["warehouse"] = (
    {
        "description": "A store stocks Products in a warehouse. A box of product p takes Space[p] square meters, weighs Mass[p] and is worth Worth[p]. Area square meters and a floor load of MaxLoad are available. Maximize stock value.",
        "parameters": {"Space": P("Floor area per box", ["Products"]), "Mass": P("Weight per box", ["Products"]), "Worth": P("Value per box", ["Products"]),
                       "Area": P("Warehouse area"), "MaxLoad": P("Maximum total weight"),
                       "Rent": P("Rent per square meter of extra space"), "MaxRented": P("Extra space that can be rented")},
        "sets": {"Products": {"description": "Stocked products"}},
        "variables": {"Boxes": V("Boxes stocked of each product", "integer", ["Products"], 0, 80),
                      "Rented": V("Extra square meters rented")},
        "constraints": [
            C("Boxes cannot use more than Area plus rented space.", "sum(p in Products, Space[p]*Boxes[p]) <= Area + Rented"),
            C("At most MaxRented square meters can be rented.", "Rented <= MaxRented"),
            C("Total weight cannot exceed MaxLoad.", "sum(p in Products, Mass[p]*Boxes[p]) <= MaxLoad"),
        ],
        "objective": objective_decl("Maximize the value of stock held minus rent.", "max", "sum(p in Products, Worth[p]*Boxes[p]) - Rent*Rented"),
    },
    {"sets": {"Products": ["tv", "fridge", "oven"]},
     "parameters": {"Space": [1.5, 2, 1], "Mass": [30, 90, 50], "Worth": [400, 900, 550], "Area": 100, "MaxLoad": 3950, "Rent": 120, "MaxRented": 15}},
)

CORPUS["energy"] = (
    {
        "description": "A utility meets Demand megawatt-hours from a gas plant and purchased wind power. Gas costs GasCost per MWh and emits GasEmission tons of CO2; wind costs WindCost and is capped at WindCap. Emissions cannot exceed EmissionCap. Minimize cost.",
        "parameters": {"Demand": P("Energy required (MWh)"), "GasCost": P("Cost per MWh of gas power"), "WindCost": P("Cost per MWh of wind power"),
                       "GasEmission": P("CO2 per MWh of gas power"), "WindCap": P("Wind power available (MWh)"), "EmissionCap": P("Emission limit (tons)")},
        "variables": {"Gas": V("Gas power generated (MWh)"), "Wind": V("Wind power bought (MWh)")},
        "constraints": [
            C("Generation must meet Demand.", "Gas + Wind >= Demand"),
            C("Wind power cannot exceed WindCap.", "Wind <= WindCap"),
            C("Emissions cannot exceed EmissionCap.", "GasEmission*Gas <= EmissionCap"),
        ],
        "objective": objective_decl("Minimize the cost of supply.", "min", "GasCost*Gas + WindCost*Wind"),
    },
    {"sets": {}, "parameters": {"Demand": 500, "GasCost": 42, "WindCost": 61, "GasEmission": 0.45, "WindCap": 300, "EmissionCap": 180}},
)


def main():
    for name, (f, d) in CORPUS.items():
        out = ROOT / name
        out.mkdir(parents=True, exist_ok=True)
        (out / "formulation.json").write_text(json.dumps(f, indent=2) + "\n")
        (out / "instance.json").write_text(json.dumps(d, indent=2) + "\n")


if __name__ == "__main__":
    main()
