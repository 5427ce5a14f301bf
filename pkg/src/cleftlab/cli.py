"""Command-line front end: ``cleftlab build | check | verify | instances``.

Exit codes::

    build      0 ok, 2 schema violation, 3 invariant violation
    check      0 verdict computed, 1 inconclusive, 2 missing or malformed input
    verify     0 pass, 1 vacuous, 2 missing input, 3 invalid instance, 4 counterexample
    instances  0
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import harness as H
from . import io
from .algebra import Algebra, AlgebraError, InadmissibleBound
from .cleft import CleftInstance, InstanceError, theta_extension
from .homology import minimal_presentation, tau
from .linalg import PRIMES
from .rep import DecompositionError, Inconclusive, ModuleLawError, ThetaData
from .silting import (cosilting_presentation, is_cosilting, is_n_tilting, is_silting, is_support_tau_tilting,
                      is_tau_rigid, silting_presentation, tilting_conditions)

log = logging.getLogger("cleftlab")

KINDS = ("tau-rigid", "silting", "support-tau-tilting", "n-tilting", "cosilting")


@dataclass(frozen=True)
class RunConfig:
    p: int | None = None
    catalog_bound: int = 3
    pd_bound: int = 12
    seed: int = 0
    budget_iso: int = 256
    budget_enum: int = 200_000
    out: str | None = None
    threads: int | None = None

    def __post_init__(self):
        if self.p is not None and self.p not in PRIMES:
            raise ValueError(f"--field must be one of {PRIMES}")
        for name in ("catalog_bound", "pd_bound", "budget_iso", "budget_enum"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        threads = os.environ.get("CLEFTLAB_THREADS")
        return cls(args.field, args.catalog_bound, args.pd_bound, args.seed, args.budget_iso, args.budget_enum,
                   args.out, int(threads) if threads and threads.isdigit() else None)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# -------------------------------------------------------------------- build

def cmd_build(args, cfg: RunConfig) -> int:
    try:
        a = io.algebra_from_quiver(io.read_json(args.quiver))
    except FileNotFoundError as e:
        return _fail(2, f"missing input {e.filename}")
    except io.SchemaError as e:
        return _fail(2, f"{args.quiver}: {e}")
    except InadmissibleBound as e:
        return _fail(3, f"{args.quiver}: {e} (witness path {e.witness})")
    except AlgebraError as e:
        return _fail(3, f"{args.quiver}: {e}")
    if cfg.p is not None and cfg.p != a.p:
        return _fail(2, f"--field {cfg.p} disagrees with the quiver file (field {a.p})")
    rep = a.validate()
    print(rep.render())
    if not rep.ok:
        return _fail(3, f"algebra fails {[c.name for c in rep.failures]}")
    artifact = {"kind": "algebra", "algebra": io.algebra_to_json(a)}
    if args.bimodule:
        try:
            m = io.bimodule_from_json(io.read_json(args.bimodule), a)
            th = io.theta_from_json(io.read_json(args.theta), m) if args.theta else ThetaData.zero(m)
        except FileNotFoundError as e:
            return _fail(2, f"missing input {e.filename}")
        except io.SchemaError as e:
            return _fail(2, str(e))
        except ModuleLawError as e:
            return _fail(3, f"bimodule: {e}")
        th_rep = th.validate()
        print(th_rep.render())
        if not th_rep.ok:
            bad = th_rep.failures[0]
            return _fail(3, f"theta fails {bad.name} (witness {bad.witness})")
        try:
            inst = theta_extension(a, th, args.name or "")
        except InstanceError as e:
            return _fail(3, str(e))
        print(inst.validate().render())
        artifact = io.instance_to_json(inst)
    text = io.dump(artifact)
    _emit(text, cfg.out)
    if cfg.out:
        print(f"wrote {cfg.out} ({artifact['kind']}, dim {a.dim if artifact['kind'] == 'algebra' else inst.total.dim})")
    return 0


# -------------------------------------------------------------------- check

def _load_algebra(path: str) -> Algebra:
    data = io.read_json(path)
    if "vertices" in data and "arrows" in data:
        return io.algebra_from_quiver(data)
    obj = io.load_artifact(path)
    return obj.total if isinstance(obj, CleftInstance) else obj


def cmd_check(args, cfg: RunConfig) -> int:
    try:
        a = _load_algebra(args.algebra)
        y = io.module_from_json(io.read_json(args.module), a)
    except FileNotFoundError as e:
        return _fail(2, f"missing artifact {e.filename}")
    except (io.SchemaError, ModuleLawError, AlgebraError) as e:
        return _fail(2, str(e))
    evidence = {"kind": args.kind, "algebra": a.name, "module_dim": y.dim, "dimension_vector": y.vertex_dims,
                "field": a.p, "seed": cfg.seed}
    try:
        if args.kind == "tau-rigid":
            t = tau(y)
            verdict = is_tau_rigid(y)
            evidence["tau_dim"] = t.dim
            evidence["sigma"] = _sigma_info(minimal_presentation(y))
        elif args.kind == "support-tau-tilting":
            verdict = is_support_tau_tilting(y, cfg.seed)
            evidence["support"] = [a.vertices[i] for i in y.support()]
        elif args.kind == "n-tilting":
            c = tilting_conditions(y, args.n, cfg.seed)
            verdict = is_n_tilting(y, args.n, cfg.seed)
            evidence.update({"n": args.n, **{k: c[k] for k in ("T1", "pd", "T2", "ext", "T3", "T3_failing_vertex")}})
        else:
            cat = H.catalog_bruteforce(a, cfg.catalog_bound, cfg.seed, cfg.budget_enum)
            evidence["catalog"] = cat.metadata()
            if args.kind == "silting":
                sigma = silting_presentation(y)
                verdict = is_silting(y, sigma, cat)
                evidence["sigma"] = _sigma_info(sigma)
            else:
                verdict = is_cosilting(y, cat, cfg.seed)
                evidence["sigma_of_dual"] = _sigma_info(cosilting_presentation(y))
    except (H.BudgetExceeded, Inconclusive, DecompositionError) as e:
        evidence["verdict"] = "inconclusive"
        evidence["reason"] = str(e)
        print("inconclusive")
        _emit(json.dumps(evidence, sort_keys=True, ensure_ascii=False) + "\n", cfg.out)
        return 1
    evidence["verdict"] = bool(verdict)
    print("true" if verdict else "false")
    _emit(json.dumps(evidence, sort_keys=True, ensure_ascii=False) + "\n", cfg.out)
    return 0


def _sigma_info(pres) -> dict:
    a = pres.algebra
    return {"P1": [a.vertices[i] for i in pres.p1], "P0": [a.vertices[i] for i in pres.p0],
            "minimal": bool(pres.minimal)}


# ------------------------------------------------------------------- verify

def _load_shipped(args, cfg: RunConfig) -> H.Shipped:
    key = args.instance
    if key in H.SHIPPED or key in H.TEST_ONLY:
        return H.shipped(key, cfg.p or 2)
    inst = io.load_artifact(key)
    if not isinstance(inst, CleftInstance):
        raise io.SchemaError("artifact is an algebra, not an instance", "$.kind")
    if cfg.p is not None and cfg.p != inst.p:
        raise io.SchemaError(f"--field {cfg.p} disagrees with the artifact (field {inst.p})", "$.base.field")
    cat_r = H.catalog_bruteforce(inst.base, cfg.catalog_bound, cfg.seed, cfg.budget_enum)
    cat_t = H.catalog_bruteforce(inst.total, cfg.catalog_bound, cfg.seed, cfg.budget_enum)
    log.info("catalogs: R %d, T %d indecomposables (bound %d)", len(cat_r), len(cat_t), cfg.catalog_bound)
    return H.Shipped(key, f"artifact {key}", inst, cat_r, cat_t)


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        s = _load_shipped(args, cfg)
    except FileNotFoundError as e:
        return _fail(2, f"missing instance {e.filename}; shipped: {', '.join(H.SHIPPED)}")
    except io.SchemaError as e:
        return _fail(2, str(e))
    except (InstanceError, ModuleLawError) as e:
        rep = getattr(e, "report", None)
        if rep is not None:
            print(rep.render(), file=sys.stderr)
        return _fail(3, f"instance failed validation: {e}")
    except H.BudgetExceeded as e:
        return _fail(1, str(e))
    rep = s.inst.validate()
    if not rep.ok:
        print(rep.render(), file=sys.stderr)
        return _fail(3, f"instance failed validation: {[c.name for c in rep.failures]}")
    if args.theorem == "cor4.4" and "tensor_powers" not in s.inst.extras:
        return _fail(2, f"cor4.4 needs a tensor-ring instance; {s.key} is not one")
    report = H.run_theorem(args.theorem, s, cfg.seed, args.n, cfg.pd_bound, cfg.threads, False, cfg.budget_iso)
    if cfg.out:
        Path(cfg.out).write_text(report.to_jsonl())
        print(report.render())
    else:
        sys.stdout.write(report.to_jsonl())
        print(report.render(), file=sys.stderr)
    return {"pass": 0, "vacuous": 1, "fail": 4}[report.verdict]


def cmd_instances(args, cfg: RunConfig) -> int:
    for key in H.SHIPPED:
        s = H.shipped(key, cfg.p or 2)
        print(f"{key:12s} dim R {s.inst.nR}, dim M {s.inst.nM}, dim T {s.inst.total.dim}  {s.description}")
        if args.export:
            d = Path(args.export)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{key}.json").write_text(io.dump(io.instance_to_json(s.inst)))
    print("theorems: " + ", ".join(H.THEOREMS))
    return 0


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="prime p in {2,3,5,7}")
    common.add_argument("--catalog-bound", type=int, default=3, help="total dimension bound for brute-force catalogs")
    common.add_argument("--pd-bound", type=int, default=12, help="projective dimension search bound")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-iso", type=int, default=256, help="exhaustive isomorphism sweep budget")
    common.add_argument("--budget-enum", type=int, default=200_000, help="brute-force catalog search budget")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cleftlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build and validate an algebra or θ-extension artifact")
    b.add_argument("--quiver", required=True)
    b.add_argument("--bimodule")
    b.add_argument("--theta")
    b.add_argument("--name")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", parents=[common], help="decide a property of a module")
    c.add_argument("kind", choices=KINDS)
    c.add_argument("--algebra", required=True, help="artifact from build, or a quiver file")
    c.add_argument("--module", required=True)
    c.add_argument("--n", type=int, default=1, help="n for n-tilting")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", parents=[common], help="run a theorem battery on an instance")
    v.add_argument("theorem", choices=list(H.THEOREMS))
    v.add_argument("--instance", required=True, help="shipped instance name or instance artifact")
    v.add_argument("--n", type=int, default=1, help="n for thm3.5 and cor4.4")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("instances", parents=[common], help="list shipped instances")
    i.add_argument("--export", help="directory to write instance artifacts into")
    i.set_defaults(func=cmd_instances)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = RunConfig.from_args(args)
    except ValueError as e:
        return _fail(2, str(e))
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
