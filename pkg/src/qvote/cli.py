"""Command-line driver: ``qvote run | sample | check | demo``.

Exit codes: 0 success, 1 a check or demo failed, 2 bad input, 3 QMR2 revote,
4 classical majority rule hit a cycle under ``--cycle-policy error``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from typing import Callable, Sequence

import numpy as np

from . import quantum as q
from .constitutions import (
    CONSTITUTIONS,
    CycleError,
    NonPureInput,
    Profile,
    Revote,
    SocietyOutcome,
    classical_mr,
    classical_mr_constitution,
    constant,
    dephased_voter,
    qmr3_sample,
)
from .prefs import CandidateSet, Mode, PreferenceError, enumerate_basis, format_order
from .properties import basis_profiles, random_mixed_profiles, random_pure_profiles, run_all
from .scenario import Scenario, ScenarioError, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_REVOTE, EXIT_CYCLE = 0, 1, 2, 3, 4
DEFAULT_BUDGET = 50_000


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream for ``seed``. Parallel workers should use :func:`rng_streams` instead."""
    return np.random.Generator(np.random.PCG64(seed))


def rng_streams(seed: int, n: int) -> list[np.random.Generator]:
    """``n`` independent PCG64 streams spawned from ``seed`` via SeedSequence."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]


class Output:
    """Collects text lines and structured records; emits one of them."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def text(self, line: str = "") -> None:
        if self.fmt == "text":
            print(line, file=self.stream)

    def record(self, rec: dict) -> None:
        if self.fmt == "records":
            print(json.dumps(rec, sort_keys=True), file=self.stream)


def _fmt_p(p: float) -> str:
    return f"{p:.12f}"


def _emit_outcome(out: Output, outcome: SocietyOutcome) -> None:
    basis = outcome.basis
    state = outcome.state
    if isinstance(state, q.StateVector):
        out.text("society's state (amplitudes):")
        for i in np.flatnonzero(np.abs(state.amplitudes) > 1e-15):
            a = state.amplitudes[i]
            out.text(f"  {basis.labels[i]:<12} {a.real:+.12f} {a.imag:+.12f}i")
            out.record({"record": "amplitude", "order": basis.labels[i], "re": float(a.real), "im": float(a.imag)})
    else:
        diag = state.diag()
        out.text("society's state (diagonal):")
        for i in np.flatnonzero(diag > 1e-15):
            out.text(f"  {basis.labels[i]:<12} {_fmt_p(diag[i])}")
            out.record({"record": "diagonal", "order": basis.labels[i], "value": float(diag[i])})
        off = state.matrix - np.diag(state.matrix.diagonal())
        if np.abs(off).max(initial=0.0) > 1e-15:
            out.text("  (state has off-diagonal coherences)")
    _emit_distribution(out, outcome.distribution)


def _emit_distribution(out: Output, dist: dict[str, float], label: str = "classical distribution") -> None:
    out.text(f"{label}:")
    for k, v in dist.items():
        out.text(f"  Pr[{k}] = {_fmt_p(v)}")
        out.record({"record": "probability", "order": k, "probability": v})


def _emit_frequencies(out: Output, draws: Sequence[str]) -> None:
    counts = Counter(draws)
    n = len(draws)
    out.text(f"empirical frequencies over {n} samples:")
    for k in sorted(counts):
        out.text(f"  {k:<12} {counts[k]:>8}  {counts[k] / n:.6f}")
        out.record({"record": "frequency", "order": k, "count": counts[k], "frequency": counts[k] / n})


def _society(sc: Scenario) -> SocietyOutcome:
    if sc.constitution == "classical-mr":
        return classical_mr_constitution(sc.cycle_policy)(sc.profile)
    return CONSTITUTIONS[sc.constitution](sc.profile)


def _classical_votes(profile: Profile):
    votes = []
    for p in profile.voter_probabilities():
        hit = np.flatnonzero(p > 1 - q.STATE_TOL)
        if hit.size != 1:
            raise ScenarioError("classical-mr needs every voter to submit a single order")
        votes.append(profile.basis.orders[int(hit[0])])
    return votes


def _draw_society(sc: Scenario, outcome: SocietyOutcome | None, n: int, rng: np.random.Generator) -> list[str]:
    if sc.constitution == "qmr3":
        return [format_order(qmr3_sample(sc.profile, rng)) for _ in range(n)]
    idx = q.sample(outcome.state, rng, size=n)
    return [sc.basis.labels[int(i)] for i in idx]


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    _apply_overrides(sc, args)
    out = Output(args.format)
    out.text(f"scenario {sc.source}: {sc.constitution}, {sc.basis.mode.value} basis, "
             f"{sc.basis.candidates.m} candidates, {sc.profile.n_voters} voters")
    out.record({
        "record": "scenario", "source": sc.source, "constitution": sc.constitution, "mode": sc.basis.mode.value,
        "candidates": list(sc.basis.candidates.labels), "voters": sc.profile.n_voters, "seed": sc.seed,
        "samples": sc.samples,
    })
    if sc.constitution == "classical-mr":
        votes = _classical_votes(sc.profile)
        try:
            result = classical_mr(votes, sc.cycle_policy)
        except CycleError as exc:
            comps = [sorted(c) for c in exc.report.scc_partition]
            out.text(f"cycle: {exc}")
            out.record({"record": "cycle", "sccs": comps, "pairs": [list(p) for p in exc.report.involved_pairs]})
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CYCLE
        out.text(f"society's preference: {result}")
        out.record({"record": "result", "order": str(result)})
        return EXIT_OK
    try:
        outcome = _society(sc)
    except Revote as exc:
        out.text("revote required")
        out.record({"record": "revote", "norm": float(exc.xi.norm())})
        print("revote required", file=sys.stderr)
        return EXIT_REVOTE
    _emit_outcome(out, outcome)
    if sc.samples > 0:
        _emit_frequencies(out, _draw_society(sc, outcome, sc.samples, make_rng(sc.seed)))
    return EXIT_OK


def cmd_sample(args) -> int:
    sc = load_scenario(args.scenario)
    _apply_overrides(sc, args)
    n = sc.samples if sc.samples > 0 else 1
    rng = make_rng(sc.seed)
    out = Output(args.format)
    if args.votes:
        prof = sc.profile
        if prof.is_product:
            draws = [
                tuple(sc.basis.labels[int(q.sample(s, rng))] for s in prof.voters) for _ in range(n)
            ]
        else:
            idx = q.sample(prof.joint, rng, size=n)
            draws = [tuple(format_order(o) for o in prof.orders_of(int(t))) for t in idx]
        for k, d in enumerate(draws):
            out.text(" ".join(d))
            out.record({"record": "votes", "sample": k, "orders": list(d)})
        return EXIT_OK
    outcome = None
    if sc.constitution != "qmr3":
        try:
            outcome = _society(sc)
        except Revote:
            print("revote required", file=sys.stderr)
            return EXIT_REVOTE
    draws = _draw_society(sc, outcome, n, rng)
    for k, d in enumerate(draws):
        out.text(d)
        out.record({"record": "sample", "sample": k, "order": d})
    return EXIT_OK


def _apply_overrides(sc: Scenario, args) -> None:
    if getattr(args, "constitution", None):
        if args.constitution not in CONSTITUTIONS:
            raise ScenarioError(f"unknown constitution {args.constitution!r}")
        sc.constitution = args.constitution
    if getattr(args, "seed", None) is not None:
        sc.seed = args.seed
    if getattr(args, "samples", None) is not None:
        sc.samples = args.samples
    if getattr(args, "cycle_policy", None):
        sc.cycle_policy = args.cycle_policy


CHECK_CONSTITUTIONS: dict[str, Callable] = {
    "qmr": lambda: CONSTITUTIONS["qmr"],
    "qmr2": lambda: CONSTITUTIONS["qmr2"],
    "qmr3": lambda: CONSTITUTIONS["qmr3"],
    "classical-mr": lambda: classical_mr_constitution("all_equal"),
    # test hooks with known verdicts
    "constant": lambda: constant("a>b>c"),
    "dictator": lambda: dephased_voter(0),
}


def cmd_check(args) -> int:
    mode = Mode(args.mode)
    candidates = CandidateSet.first(args.candidates)
    restrict = None
    if args.constitution == "classical-mr":
        # ties in majority outcomes need the weak basis; votes stay in the requested mode
        basis = enumerate_basis(candidates, Mode.WEAK)
        restrict = list(enumerate_basis(candidates, mode).orders)
    else:
        basis = enumerate_basis(candidates, mode)
    if args.constitution == "constant" and basis.candidates.m != 3:
        raise ScenarioError("the constant test constitution is defined for three candidates")
    if args.random is None and not args.exhaustive:
        raise ScenarioError("choose --exhaustive or --random N")
    size = args.random if args.random is not None else len(restrict or basis.orders) ** args.voters
    if size > args.budget:
        print(f"refusing: family of {size} profiles exceeds --budget {args.budget}", file=sys.stderr)
        return EXIT_INPUT
    if args.random is not None:
        if args.constitution in ("qmr2",):
            family = random_pure_profiles(basis, args.voters, args.random, args.seed)
        elif args.constitution == "classical-mr":
            raise ScenarioError("classical-mr is only defined on basis-state profiles; use --exhaustive")
        else:
            family = random_mixed_profiles(basis, args.voters, args.random, args.seed)
    else:
        family = basis_profiles(basis, args.voters, restrict)
    constitution = CHECK_CONSTITUTIONS[args.constitution]()
    reports = run_all(constitution, family)
    out = Output(args.format)
    out.record({"record": "check", "constitution": args.constitution, "family": family.name, "profiles": len(family)})
    out.text(f"checking {args.constitution} on {family.name} ({len(family)} profiles)")
    for r in reports:
        out.text(r.format_text())
        out.record(r.to_record())
    failed = [r.name for r in reports if not r.passed]
    out.text("all properties pass" if not failed else "failed: " + ", ".join(failed))
    out.record({"record": "summary", "passed": not failed, "failed": failed})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_demo(args) -> int:
    from .demos import DEMOS

    if args.name == "list":
        for name, (_, doc) in DEMOS.items():
            print(f"{name:<16} {doc}")
        return EXIT_OK
    if args.name not in DEMOS:
        print(f"unknown demo {args.name!r}; try 'qvote demo list'", file=sys.stderr)
        return EXIT_INPUT
    fn, _ = DEMOS[args.name]
    out = Output(args.format)
    ok = fn(out, args)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qvote", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings such as coefficient renormalization")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scenario=True):
        if scenario:
            sp.add_argument("scenario", help="scenario YAML file")
            sp.add_argument("--constitution", choices=sorted(CONSTITUTIONS))
            sp.add_argument("--cycle-policy", choices=["error", "all_equal"])
        sp.add_argument("--seed", type=int)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--format", choices=["text", "records"], default="text")

    run = sub.add_parser("run", help="run one election scenario")
    common(run)
    run.set_defaults(func=cmd_run)

    smp = sub.add_parser("sample", help="print seeded samples of society's outcome (or of the votes)")
    common(smp)
    smp.add_argument("--votes", action="store_true", help="sample the submitted votes jointly instead")
    smp.set_defaults(func=cmd_sample)

    chk = sub.add_parser("check", help="run the four property checkers on a profile family")
    chk.add_argument("--constitution", choices=sorted(CHECK_CONSTITUTIONS), default="qmr")
    chk.add_argument("--candidates", type=int, default=3)
    chk.add_argument("--voters", type=int, default=3)
    chk.add_argument("--mode", choices=["strict", "weak"], default="strict")
    fam = chk.add_mutually_exclusive_group()
    fam.add_argument("--exhaustive", action="store_true", help="every basis-state profile")
    fam.add_argument("--random", type=int, metavar="N", help="N seeded random profiles")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum family size")
    chk.add_argument("--format", choices=["text", "records"], default="text")
    chk.set_defaults(func=cmd_check)

    demo = sub.add_parser("demo", help="reproduce a named worked example ('list' to enumerate)")
    demo.add_argument("name")
    common(demo, scenario=False)
    demo.add_argument("--mode", choices=["strict", "weak"], default="strict")
    demo.add_argument("--dot", action="store_true", help="print digraphs in DOT format where relevant")
    demo.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, PreferenceError, NonPureInput, q.StateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
