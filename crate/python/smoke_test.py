#!/usr/bin/env python3
"""Smoke test for the pygrover extension module.

Builds nothing itself: run `cargo build -p pygrover --release` first, then
`python3 python/smoke_test.py`. The script locates the compiled cdylib in
the workspace target directory, stages it on sys.path under the module name,
and exercises the main types and operations end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

WORKSPACE = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        WORKSPACE / "target" / "release" / "libpygrover.so",
        WORKSPACE / "target" / "debug" / "libpygrover.so",
        WORKSPACE / "target" / "release" / "libpygrover.dylib",
        WORKSPACE / "target" / "debug" / "libpygrover.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "pygrover cdylib not found; run `cargo build -p pygrover --release` first"
        )
    stage = Path(tempfile.mkdtemp(prefix="pygrover-"))
    shutil.copy2(built, stage / "pygrover.so")
    sys.path.insert(0, str(stage))


stage_module()
import pygrover  # noqa: E402


def check(label: str, condition: bool) -> None:
    status = "ok" if condition else "FAIL"
    print(f"  {label}: {status}")
    if not condition:
        sys.exit(1)


def main() -> None:
    print("pygrover smoke test")

    # register basics
    state = pygrover.StateVector.uniform(2)
    amps = state.amplitudes()
    check("uniform(2) amplitudes are 1/2", all(abs(a - 0.5) < 1e-15 for a in amps))
    check("probabilities sum to 1", abs(sum(abs(a) ** 2 for a in amps) - 1) < 1e-12)

    # Walsh-Hadamard is an involution and maps e0 to the uniform state
    e0 = pygrover.StateVector.basis(3, 0)
    e0.walsh_hadamard()
    expected = 2 ** -1.5
    check(
        "walsh(e0) is uniform",
        all(abs(a.real - expected) < 1e-15 for a in e0.amplitudes()),
    )
    e0.walsh_hadamard()
    check("walsh is an involution", abs(e0.probability_of(0) - 1.0) < 1e-12)

    # selective phase keeps probabilities
    s = pygrover.StateVector.uniform(2)
    s.selective_phase({2: math.pi})
    check("phase pi flips sign", abs(s.amplitude(2).real + 0.5) < 1e-15)
    check("phase keeps probability", abs(s.probability_of(2) - 0.25) < 1e-15)

    # the four-state search is exact after one iteration
    oracle = pygrover.OracleSpec.from_targets(2, [2])
    report = pygrover.run(oracle, iterations=1, seed=7)
    check("four-state search samples the target", report.sampled_index == 2)
    check("success probability is 1", abs(report.success_probability - 1.0) < 1e-12)
    check("oracle calls equal iterations", report.oracle_calls == report.iterations)

    # the automatic schedule
    check("schedule for 2^20 states", pygrover.optimal_iterations(2**20, 1) == 804)
    oracle = pygrover.OracleSpec.from_targets(10, [123])
    report = pygrover.run(oracle, seed=1)
    check("auto run beats 1/2", report.success_probability >= 0.5)

    # scan and the reduced model agree
    scan = pygrover.trajectory_scan(oracle, 25)
    model = pygrover.TwoLevelState.uniform(2**10, 1)
    for m, prob in scan:
        if m > 0:
            model = pygrover.grover_iteration_model(model)
        if abs(model.success_probability() - prob) > 1e-10:
            check(f"model matches scan at m={m}", False)
    check("model matches scan at every iteration", True)
    check("halfway crossing within sqrt(2N)", pygrover.find_halfway_iteration(2**10) < math.sqrt(2 * 2**10))

    # record-table oracle and the classical baseline
    with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
        f.write("ada\ngrace\nkatherine\nmargaret\n")
        table_path = f.name
    oracle = pygrover.OracleSpec.from_table_file(table_path, "katherine")
    check("table query marks index 2", oracle.targets == [2])
    probes = oracle.classical_linear_search(seed=3)
    check("classical probe count in range", 1 <= probes <= 4)

    # degeneracy search: finds hidden targets, reports absence
    hidden = pygrover.OracleSpec.from_targets(6, [13, 44])
    found = pygrover.degeneracy_search(hidden, seed=2)
    check("degeneracy search verifies a target", found in (13, 44))
    empty = pygrover.OracleSpec.from_targets(6, [])
    check("degeneracy search reports absence", pygrover.degeneracy_search(empty, seed=2) is None)

    # error mapping
    try:
        pygrover.OracleSpec.from_targets(2, [4])
        check("bounds error raises ValueError", False)
    except ValueError:
        check("bounds error raises ValueError", True)

    # verification suite
    import json

    verdicts = json.loads(pygrover.verification_report(n_min=2, n_max=6))
    check("verification suite passes", verdicts["all_passed"] is True)

    print("smoke test passed")


if __name__ == "__main__":
    main()
