"""Adversarial backend responses for plan-parsing robustness checks."""

import json
import random

IDS = ["ds_1", "ds_2", "ds_3", "ds_4"]
ACTIONS = ["move_to_docking_station", "record_data"]


def _step(a, t):
    return {"action": a, "target": t}


def _valid(rng):
    ids = rng.sample(IDS, rng.randint(1, 4))
    steps = []
    for s in ids:
        steps += [_step(ACTIONS[0], s), _step(ACTIONS[1], s)]
    return {"plan": steps, "reasoning": "nearest first"}


def _mutations(rng):
    base = _valid(rng)
    steps = base["plan"]
    sid = steps[0]["target"]
    yield json.dumps({"reasoning": "x"})
    yield json.dumps({"plan": steps})
    yield json.dumps({"plan": {"0": steps[0]}, "reasoning": "x"})
    yield json.dumps({"plan": steps, "reasoning": 42})
    yield json.dumps({"plan": [], "reasoning": "empty"})
    yield json.dumps({"plan": ["move ds_1"], "reasoning": "x"})
    yield json.dumps({"plan": [{"action": ACTIONS[0]}], "reasoning": "x"})
    yield json.dumps({"plan": [{"target": sid}], "reasoning": "x"})
    yield json.dumps({"plan": [_step(7, sid)], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[0], ["ds_1"])], "reasoning": "x"})
    yield json.dumps({"plan": [_step("fly_to", sid)], "reasoning": "x"})
    yield json.dumps({"plan": [_step("Move_To_Docking_Station", sid)], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[0], "ds_9")], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[0], "DS_1")], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[0], "")], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[1], sid)], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[0], "ds_1"), _step(ACTIONS[1], "ds_2")], "reasoning": "x"})
    yield json.dumps({"plan": [_step(ACTIONS[0], sid), _step(ACTIONS[0], sid)], "reasoning": "x"})
    yield json.dumps({"plan": steps + [steps[-1]], "reasoning": "x"})
    yield json.dumps({"plan": steps[1:] or [_step(ACTIONS[1], sid)], "reasoning": "x"})
    yield json.dumps(base)[:-rng.randint(1, 20)]
    yield json.dumps(base).replace('"', "'")
    yield "I would visit ds_1 first, then record data there."
    yield ""
    yield "null"
    yield "[" + json.dumps({"plan": steps[1:] or [_step(ACTIONS[1], sid)], "reasoning": "x"}) + "]"
    yield "{" * rng.randint(1, 50)
    yield json.dumps({"plan": [_step(ACTIONS[0], sid), _step(ACTIONS[1], sid), _step(ACTIONS[1], sid)],
                      "reasoning": "x"})


def corpus(seed=0, n=240):
    """At least ``n`` invalid responses, each a string that must be rejected."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        for raw in _mutations(rng):
            wrap = rng.choice(["{}", "Here is the plan:\n{}\nGood luck!", "```json\n{}\n```", "{} trailing"])
            out.append(wrap.replace("{}", raw, 1))
    return out
