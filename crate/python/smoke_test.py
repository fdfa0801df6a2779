#!/usr/bin/env python3
"""Smoke test for the bbsat Python extension.

Builds nothing itself: it expects the compiled module next to this file or
importable from the cargo target directory. See README for the one-liner.
"""

import pathlib
import shutil
import sys


def _ensure_importable() -> None:
    here = pathlib.Path(__file__).resolve().parent
    if any(here.glob("bbsat*.so")):
        sys.path.insert(0, str(here))
        return
    repo = here.parent
    for profile in ("release", "debug"):
        built = repo / "target" / profile / "libbbsat.so"
        if built.exists():
            shutil.copy2(built, here / "bbsat.so")
            sys.path.insert(0, str(here))
            return
    sys.exit(
        "bbsat extension not found; build it first:\n"
        "  cargo build -p bbsat-python --release --features extension-module"
    )


_ensure_importable()

import bbsat  # noqa: E402

PHI1 = "p cnf 4 5\n4 -3 0\n4 3 0\n-4 3 0\n-2 -1 0\n2 1 0\n"
PHI3 = (
    "p cnf 4 7\n4 -3 0\n-4 -3 0\n-4 3 0\n"
    "3 -2 -1 0\n3 -2 1 0\n3 2 -1 0\n3 2 1 0\n"
)


def check(condition: bool, label: str) -> None:
    if not condition:
        sys.exit(f"FAIL: {label}")
    print(f"ok: {label}")


def main() -> None:
    f = bbsat.Formula.from_dimacs(PHI1)
    check(f.n == 4 and f.num_clauses == 5, "parse DIMACS")
    check(f.brute_force() == [0b1101, 0b1110], "brute-force solution set")

    for engine in ("grouped", "random", "race"):
        verdict = f.solve(engine=engine, seed=7)
        check(verdict.is_sat(), f"{engine} verdict is sat")
        check(f.evaluate(verdict.witness), f"{engine} witness verifies")

    unsat = bbsat.Formula.from_dimacs(PHI3)
    check(unsat.solve(engine="race").status == "unsat", "race proves unsat")
    check(unsat.brute_force() == [], "oracle agrees on unsat")

    board = bbsat.Formula.extreme(3, [0b011])
    check(board.num_clauses == 7, "extreme board has 7 clauses")
    check(board.brute_force() == [0b011], "extreme board solution set")
    check(board.evaluate(0b011) and not board.evaluate(0b000), "evaluation")
    check(
        board.evaluate_matching(0b011) and not board.evaluate_matching(0b100),
        "matching evaluation",
    )

    rnd = bbsat.Formula.random(10, 50, width_min=1, width_max=4, seed=3)
    again = bbsat.Formula.random(10, 50, width_min=1, width_max=4, seed=3)
    check(rnd.to_dimacs() == again.to_dimacs(), "random generator is seeded")
    v = rnd.solve(engine="race", seed=3)
    check(v.status in ("sat", "unsat"), "race decides a random instance")
    check((len(rnd.brute_force()) > 0) == v.is_sat(), "race agrees with oracle")

    expanded = board.simplify()
    check(expanded is not None, "unique-solution board simplifies")

    check(bbsat.iv_rank([], 4) == 0, "iv rank of empty set")
    check(bbsat.iv_rank([0], 4) == 1, "iv rank of {x0}")
    check(bbsat.iv_rank([1], 4) == 2, "iv rank of {x1}")
    check(bbsat.iv_rank([0, 1, 2, 3], 4) == 15, "iv rank of the full set")
    check(bbsat.iv_unrank(6, 4) == [0, 2], "iv unrank")

    rows = bbsat.prob_table(10, 5)
    check(len(rows) == 6, "probability table length")
    f0 = rows[0]
    check(abs(f0[1] - 1 / (1024 * 1024)) < 1e-18, "probability value at f=0")
    check(rows[5][2] > rows[0][2], "outer probability grows with f")

    print("smoke test passed")


if __name__ == "__main__":
    main()
