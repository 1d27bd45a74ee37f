"""``relent`` command line for pipeline files and law suites.

JSON goes to stdout and one-line summaries to stderr.  Exit status is 0
on success, 1 on a validation or law failure and 2 on usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from relent.entropy import parse_functor
from relent.errors import FiberPolicyError, NotSurjective, ParseError, ValidationError
from relent.extreal import deviation, ext_sum
from relent.finstat import (
    MORPH_TOL,
    compose_morphisms,
    make_morphism,
    morphism_parts_from_json,
    morphism_to_json,
    optimal_hypothesis,
    parse_policy,
)
from relent.harness import GenConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
AGREEMENT_TOL = 1e-8


class Failure(Exception):
    """A validation failure carrying its JSON diagnostic."""

    def __init__(self, diagnostic: dict):
        super().__init__(diagnostic.get("reason", ""))
        self.diagnostic = diagnostic


def _emit(payload: dict, summary: str) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    print(summary, file=sys.stderr)


def load_pipeline(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict) or not isinstance(data.get("stages"), list):
        raise ParseError(f"{path}: expected an object with a 'stages' list")
    if not data["stages"]:
        raise ParseError(f"{path}: pipeline has no stages")
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ParseError(f"{path}: 'options' must be an object")
    return data


def _stage_failure(index: int, exc: ValidationError) -> Failure:
    diag = {"stage": index, "error": type(exc).__name__, "reason": str(exc)}
    equation = getattr(exc, "equation", None)
    if equation:
        diag["equation"] = equation
    return Failure(diag)


def parse_stages(data: dict):
    parts = []
    for i, record in enumerate(data["stages"], start=1):
        try:
            parts.append(morphism_parts_from_json(record))
        except ParseError as exc:
            raise ParseError(f"stage {i}: {exc}") from exc
        except ValidationError as exc:
            raise _stage_failure(i, exc) from exc
    return parts


def validate_pipeline(data: dict, tol: float):
    """Build every stage, then check that consecutive stages chain."""
    stages = []
    for i, parts in enumerate(parse_stages(data), start=1):
        try:
            stages.append(make_morphism(*parts, tol=tol))
        except ValidationError as exc:
            raise _stage_failure(i, exc) from exc
    for i in range(1, len(stages)):
        prev, cur = stages[i - 1], stages[i]
        if not prev.codomain.matches(cur.domain, tol):
            raise Failure(
                {
                    "stage": i + 1,
                    "error": "ObjectMismatch",
                    "reason": f"ObjectMismatch at stage {i + 1}",
                    "detail": "domain differs from the codomain of the previous stage",
                }
            )
    return stages


def _tolerance(args, data) -> float:
    if args.tolerance is not None:
        return args.tolerance
    return float(data.get("options", {}).get("tolerance", MORPH_TOL))


def cmd_check(args) -> int:
    data = load_pipeline(args.file)
    stages = validate_pipeline(data, _tolerance(args, data))
    _emit({"ok": True, "stages": len(stages)}, f"ok: {len(stages)} stage(s) validate and compose")
    return EXIT_OK


def cmd_entropy(args) -> int:
    data = load_pipeline(args.file)
    tol = _tolerance(args, data)
    name = args.functor or data.get("options", {}).get("functor", "RE")
    try:
        F = parse_functor(name)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    stages = validate_pipeline(data, tol)

    per_stage = [F(m) for m in stages]
    summed = ext_sum(per_stage)
    composite = stages[0]
    for m in stages[1:]:
        composite = compose_morphisms(m, composite)
    total = F(composite)
    gap = deviation(total, summed)
    agree = gap <= max(AGREEMENT_TOL, F.tolerance)
    payload = {
        "functor": F.name,
        "per_stage": [v.to_json() for v in per_stage],
        "total": total.to_json(),
        "sum_of_stages": summed.to_json(),
        "deviation": "inf" if gap == float("inf") else gap,
        "agree": agree,
    }
    _emit(payload, f"{F.name} total = {total} (sum of stages {summed})")
    return EXIT_OK if agree else EXIT_FAIL


def optimise_pipeline(data: dict, policy) -> dict:
    """Replace every section by the Bayesian inverse of its stage's measurement."""
    out_stages = []
    for i, (dom, _cod, f, _s) in enumerate(parse_stages(data), start=1):
        try:
            m = optimal_hypothesis(f, dom.dist, policy)
        except (NotSurjective, FiberPolicyError) as exc:
            raise _stage_failure(i, exc) from exc
        out_stages.append(morphism_to_json(m))
    result = {"stages": out_stages}
    if "options" in data:
        result["options"] = data["options"]
    return result


def cmd_bayes(args) -> int:
    try:
        policy = parse_policy(args.policy)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    data = load_pipeline(args.file)
    result = optimise_pipeline(data, policy)
    text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(json.dumps({"ok": True, "output": args.output, "stages": len(result["stages"])}))
    else:
        sys.stdout.write(text)
    print(f"optimal hypotheses written for {len(result['stages'])} stage(s)", file=sys.stderr)
    return EXIT_OK


def cmd_laws(args) -> int:
    try:
        F = parse_functor(args.functor)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    cfg = GenConfig(seed=args.seed, trials=args.trials, max_space_size=args.max_size)
    suite = run_suite(F, cfg)
    reports = suite["reports"]
    passed = all(r.passed for r in reports)
    payload = {
        "functor": F.name,
        "seed": args.seed,
        "trials": args.trials,
        "passed": passed,
        "reports": [r.to_json() for r in reports],
    }
    if suite["distinguisher"] is not None:
        payload["distinguisher"] = suite["distinguisher"].to_json()
    print(json.dumps(payload, indent=2, sort_keys=True))
    for r in reports:
        print(r.summary(), file=sys.stderr)
    if "distinguisher" in payload:
        print(f"{F.name} is not a multiple of RE (witness found)", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relent", description=__doc__.splitlines()[0])
    parser.add_argument("--tolerance", type=float, default=None,
                        help="tolerance for morphism validation (default 1e-8)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a pipeline file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("entropy", help="per-stage and total relative entropy")
    p.add_argument("file")
    p.add_argument("--functor", default=None, help="RE, G, Gprime or a sum such as 2*RE+G")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bayes", help="replace sections by optimal hypotheses")
    p.add_argument("file")
    p.add_argument("--policy", default="uniform", help="uniform or point:<label>")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_bayes)

    p = sub.add_parser("laws", help="run the law suite against a functor")
    p.add_argument("--functor", default="RE")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-size", type=int, default=6)
    p.set_defaults(func=cmd_laws)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _emit({"ok": False, "error": "ParseError", "reason": str(exc)}, f"parse error: {exc}")
        return EXIT_USAGE
    except Failure as exc:
        diag = exc.diagnostic
        _emit({"ok": False, **diag}, f"invalid (stage {diag.get('stage', '?')}): {diag['reason']}")
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
