"""Generate parity fixtures for the TypeScript client tests.

The client's selection reducer, ratio math, table builder, and number
formatting must agree exactly with the analysis engine. This script replays
random event logs through the engine and records the expected outcomes, so
the client test suite can check byte/level equality without running Python.

Run from frontend/:  python3 scripts/make_fixtures.py
"""

import json
import os
import random
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "src"))

from sonolens.exports import _sig6, export_csv  # noqa: E402
from sonolens.features import Peak  # noqa: E402
from sonolens.harmonics import SelectionState, apply_events  # noqa: E402
from sonolens.pipeline import PlotData, RunConfig, Session, _build_manifest  # noqa: E402
from sonolens.transforms import SpectralResult, TransformParams, to_db  # noqa: E402

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def mk_peak(rng: random.Random) -> Peak:
    freq = rng.choice([110.0 * k for k in range(1, 13)]) + rng.choice([0.0, 0.43])
    power = round(rng.uniform(0.01, 1.0), 6)
    return Peak(int(freq // 10), freq, power, float(to_db([power])[0]),
                round(rng.uniform(5.0, 40.0), 3), power)


def random_log(rng: random.Random, n_events: int):
    events = []
    state = SelectionState()
    for _ in range(n_events):
        kinds = ["select"]
        if state.selections:
            kinds += ["deselect", "remove"]
        if len(state.selections) >= 2:
            kinds.append("pair")
        kind = rng.choice(kinds)
        if kind == "select":
            ev = ("select", rng.choice(["p1", "p2", "p3"]), mk_peak(rng))
        elif kind in ("deselect", "remove"):
            sel = rng.choice(state.selections)
            ev = (kind, sel.plot_id, sel.peak.freq_hz)
        else:
            a, b = rng.sample([s.order for s in state.selections], 2)
            ev = ("pair", a, b)
        events.append(ev)
        state = apply_events(state, [ev])
    return events, state


def event_to_json(ev):
    if ev[0] == "select":
        return ["select", ev[1], ev[2].to_dict()]
    return [ev[0], ev[1], ev[2]]


def make_event_logs(n_logs=1000):
    rng = random.Random(20260825)
    logs = []
    for _ in range(n_logs):
        events, state = random_log(rng, rng.randint(1, 15))
        logs.append({"events": [event_to_json(e) for e in events],
                     "expected": state.to_dict()})
    return logs


def make_format_cases():
    rng = random.Random(7)
    values = [0.0, 1.0, 0.5, 2.0, 440.0, 441.4306640625, 1e-7, 123456.789,
              0.000123456, 98765432.1, -3.0103, 10500.0, 1050000.0, 1e-30]
    values += [rng.uniform(-1e6, 1e6) for _ in range(50)]
    values += [rng.uniform(0, 1) * 10 ** rng.randint(-12, 12) for _ in range(50)]
    return [[v, _sig6(v)] for v in values]


def make_csv_cases(n_cases=10):
    rng = random.Random(99)
    cases = []
    for _ in range(n_cases):
        plots = []
        state = SelectionState()
        events = []
        for pi in range(rng.randint(1, 3)):
            peaks = [mk_peak(rng) for _ in range(rng.randint(2, 6))]
            # unique freqs per plot
            seen = set()
            peaks = [p for p in peaks if not (p.freq_hz in seen or seen.add(p.freq_hz))]
            pid = f"clip{pi}:FFT_DUAL"
            freqs = np.array(sorted({pk.freq_hz for pk in peaks} | {0.0, 11025.0}))
            psd = np.full(freqs.size, 1e-6)
            result = SpectralResult(method="FFT_DUAL", freqs_hz=freqs,
                                    psd_linear=psd, psd_db=to_db(psd),
                                    params=TransformParams())
            plots.append(PlotData(pid, f"clip{pi}", "FFT_DUAL", result, None,
                                  peaks, None, []))
            for pk in rng.sample(peaks, min(len(peaks), rng.randint(1, 3))):
                events.append(("select", pid, pk))
        state = apply_events(state, events)
        orders = [s.order for s in state.selections]
        for _ in range(rng.randint(0, 2)):
            if len(orders) >= 2:
                a, b = rng.sample(orders, 2)
                events.append(("pair", a, b))
                state = apply_events(state, [events[-1]])
        man = _build_manifest(RunConfig(), 22050)
        session = Session(manifest=man, plots=plots, state=state)
        csvs = export_csv(session)
        cases.append({
            "plots": [{"plot_id": p.plot_id, "clip_id": p.clip_id,
                       "method": p.method,
                       "peaks": [pk.to_dict() for pk in p.peaks]}
                      for p in plots],
            "state": state.to_dict(),
            "integer_tolerance": 0.05,
            "peaks_csv": csvs["peaks"],
            "ratios_csv": csvs["ratios"],
        })
    return cases


def make_step_cases(n_cases=20):
    """Event logs with the expected CSV tables after every single event."""
    rng = random.Random(4242)
    cases = []
    for _ in range(n_cases):
        plots = []
        for pi, pid in enumerate(["p1", "p2", "p3"]):
            freqs = np.array([0.0, 11025.0])
            psd = np.full(2, 1e-6)
            result = SpectralResult(method="FFT_DUAL", freqs_hz=freqs,
                                    psd_linear=psd, psd_db=to_db(psd),
                                    params=TransformParams())
            plots.append(PlotData(pid, f"clip{pi}", "FFT_DUAL", result, None,
                                  [], None, []))
        man = _build_manifest(RunConfig(), 22050)
        events, _ = random_log(rng, rng.randint(1, 10))
        state = SelectionState()
        steps = []
        for ev in events:
            state = apply_events(state, [ev])
            csvs = export_csv(Session(manifest=man, plots=plots, state=state))
            steps.append({"peaks_csv": csvs["peaks"], "ratios_csv": csvs["ratios"]})
        cases.append({
            "plots": [{"plot_id": p.plot_id, "clip_id": p.clip_id,
                       "method": p.method} for p in plots],
            "events": [event_to_json(e) for e in events],
            "integer_tolerance": 0.05,
            "steps": steps,
        })
    return cases


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    with open(os.path.join(OUT_DIR, "event_logs.json"), "w") as fh:
        json.dump({"logs": make_event_logs()}, fh)
    with open(os.path.join(OUT_DIR, "format_cases.json"), "w") as fh:
        json.dump({"cases": make_format_cases()}, fh)
    with open(os.path.join(OUT_DIR, "csv_cases.json"), "w") as fh:
        json.dump({"cases": make_csv_cases()}, fh)
    with open(os.path.join(OUT_DIR, "step_cases.json"), "w") as fh:
        json.dump({"cases": make_step_cases()}, fh)
    print("fixtures written to", os.path.abspath(OUT_DIR))


if __name__ == "__main__":
    main()
