"""Regenerate the JSON fixtures under fixtures/.

Pipelines are built from explicit numbers; golden files freeze generator
and report output for fixed seeds.  Run from the repository root.
"""

import json
from pathlib import Path

from relent.entropy import RE
from relent.finstat import (
    FinStatObject,
    bang_morphism,
    make_morphism,
    morphism_to_json,
    optimal_hypothesis,
)
from relent.harness import GenConfig, check_functoriality, gen_morphism, gen_object
from relent.stochastic import FiniteFunction, ProbDist, StochasticMatrix

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def write(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def pipeline(*stages, **options):
    data = {"stages": [morphism_to_json(m) for m in stages]}
    if options:
        data["options"] = options
    return data


def two_stage():
    X = ("a", "b", "c", "d")
    q = ProbDist(X, [0.1, 0.2, 0.3, 0.4])
    f = FiniteFunction.from_mapping(X, ("u", "v"), {"a": "u", "b": "u", "c": "v", "d": "v"})
    r = ProbDist(("u", "v"), [0.3, 0.7])
    s = StochasticMatrix(("u", "v"), X, [[0.5, 0.0], [0.5, 0.0], [0.0, 0.25], [0.0, 0.75]])
    first = make_morphism(FinStatObject.of(q), FinStatObject.of(r), f, s)
    second = bang_morphism(FinStatObject.of(r), ProbDist(("u", "v"), [0.5, 0.5]))
    return first, second


def fp_chain():
    X = ("a", "b", "c", "d", "e")
    q = ProbDist(X, [0.05, 0.15, 0.2, 0.25, 0.35])
    f = FiniteFunction.from_mapping(X, ("u", "v", "w"), {"a": "u", "b": "u", "c": "v", "d": "w", "e": "w"})
    m1 = optimal_hypothesis(f, q)
    g = FiniteFunction.from_mapping(("u", "v", "w"), ("hi", "lo"), {"u": "hi", "v": "lo", "w": "lo"})
    m2 = optimal_hypothesis(g, m1.r)
    m3 = optimal_hypothesis(FiniteFunction.constant(m2.codomain.space), m2.r)
    return m1, m2, m3


def main() -> None:
    pipes = ROOT / "pipelines"
    pipes.mkdir(parents=True, exist_ok=True)
    first, second = two_stage()
    write(pipes / "two_stage.json", pipeline(first, second, functor="RE"))
    write(pipes / "fp_chain.json", pipeline(*fp_chain()))
    bang = bang_morphism(FinStatObject.from_weights(("0", "1"), [1.0, 0.0]), ProbDist(("0", "1"), [0.5, 0.5]))
    write(pipes / "bang_ln2.json", pipeline(bang))

    # stage 2 starts from a distribution that is not stage 1's codomain
    bad = pipeline(first, second)
    bad["stages"][1]["domain"]["weights"] = [0.4, 0.6]
    bad["stages"][1]["codomain"]["weights"] = [1.0]
    write(pipes / "mismatched.json", bad)

    # an outcome with probability zero; its fiber still carries a hypothesis
    X = ("a", "b", "c")
    zq = ProbDist(X, [0.4, 0.6, 0.0])
    zf = FiniteFunction.from_mapping(X, ("u", "v"), {"a": "u", "b": "u", "c": "v"})
    zs = StochasticMatrix(("u", "v"), X, [[0.5, 0.0], [0.5, 0.0], [0.0, 1.0]])
    zero = make_morphism(FinStatObject.of(zq), FinStatObject.from_weights(("u", "v"), [1.0, 0.0]), zf, zs)
    write(pipes / "zero_mass.json", pipeline(zero))

    broken = pipeline(first)
    broken["stages"][0]["s"]["entries"] = [[0.5, 0.0], [0.25, 0.0], [0.25, 0.25], [0.0, 0.75]]
    write(pipes / "not_a_section.json", broken)
    unbalanced = pipeline(first)
    unbalanced["stages"][0]["codomain"]["weights"] = [0.4, 0.6]
    write(pipes / "not_measure_preserving.json", unbalanced)
    (pipes / "malformed.json").write_text('{"stages": [ {"domain": ', encoding="utf-8")

    golden = ROOT / "golden"
    golden.mkdir(parents=True, exist_ok=True)
    cfg = GenConfig(seed=42)
    write(golden / "gen_object_seed42_size3.json", gen_object(cfg, 3).dist.weights.tolist())
    write(golden / "gen_morphism_seed42_4to2.json", morphism_to_json(gen_morphism(cfg, 4, 2)))
    report = check_functoriality(RE, GenConfig(seed=1, trials=50))
    write(golden / "lawreport_functoriality_RE_seed1_trials50.json", report.to_json())


if __name__ == "__main__":
    main()
