"""Command-line entry point: ``levy-smalltime <command> --spec FILE ...``.

Exit status: 0 for definite verdicts, 2 when any verdict is Inconclusive,
1 for errors (bad configuration, unreadable spec, I/O).
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import classifier, integral_tests as it
from .errors import InconclusiveBracket, InconclusiveClassification, LevyError
from .functionals import FunctionalKind, eval_functional, geometric_grid
from .measures import LevyProcessSpec, load_spec
from .report import emit_json, emit_plot_data, report_name
from .simulator import SimConfig, sample_paths, trend_statistic

COMMANDS = ("classify", "test", "critical", "functional", "simulate", "sweep")
FORMATS = ("json", "csv", "both")
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec_path: str
    parameters: dict = field(default_factory=dict)
    output_dir: str = "reports"
    format: str = "both"

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command: {self.command}")
        if self.format not in FORMATS:
            raise ConfigError(f"invalid parameter: format={self.format!r}")
        if not self.spec_path:
            raise ConfigError("missing parameter: spec")
        if not Path(self.spec_path).is_file():
            raise ConfigError(f"invalid parameter: spec (no such file {self.spec_path})")

    def need(self, key):
        v = self.parameters.get(key)
        if v is None:
            raise ConfigError(f"missing parameter: {key}")
        return v


@dataclass
class RunResult:
    status: int
    files: list
    payload: object = None


def _grid(text: str):
    """'lo:hi:step' (inclusive) or a comma list."""
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9))
            return [round(lo + i * step, 10) for i in range(n + 1)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"invalid parameter: grid {text!r}") from None


class _Emitter:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.stem = Path(cfg.spec_path).stem
        self.files = []

    def _params(self, extra=None):
        keep = {k: v for k, v in self.cfg.parameters.items()
                if v is not None and k not in ("dump_paths",)}
        keep.update(extra or {})
        return keep

    def json(self, obj, extra=None, command=None):
        if self.cfg.format in ("json", "both"):
            name = report_name(command or self.cfg.command, self._params(extra), "json", self.stem)
            self.files.append(emit_json(self.cfg.output_dir, name, obj))

    def csv(self, header, rows, extra=None, command=None, force=False):
        if force or self.cfg.format in ("csv", "both"):
            name = report_name(command or self.cfg.command, self._params(extra), "csv", self.stem)
            self.files.append(emit_plot_data(self.cfg.output_dir, name, header, rows))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _cls_row(kappa, quantity, c: classifier.Classification):
    return (kappa, quantity, c.kind, c.value, c.reason, c.basis)


def _inconclusive_payload(exc: InconclusiveClassification):
    out = {"outcome": "Inconclusive", "message": str(exc), "basis": exc.basis}
    if exc.verdict is not None:
        out["verdict"] = exc.verdict.to_dict(trace=False)
    return out


def _cmd_classify(cfg, spec, em):
    p = cfg.parameters
    if p.get("all_kappa"):
        kappas = _grid(p["all_kappa"])
    else:
        kappas = [float(cfg.need("kappa"))]
    if p.get("subordinator"):
        results, rows = [], []
        for g in kappas:
            c = classifier.classify_subordinator_liminf(spec.jump, g)
            results.append({"gamma": g, "classification": c.to_dict()})
            rows.append(_cls_row(g, "subordinator_liminf", c))
        em.json({"results": results})
        em.csv(["gamma", "quantity", "kind", "value", "reason", "basis"], rows)
        return EXIT_OK, results
    results, rows = [], []
    status = EXIT_OK
    for k in kappas:
        try:
            q = classifier.classify_query(spec, k, w_side=p.get("w_side") or "negative")
        except InconclusiveClassification as exc:
            status = EXIT_INCONCLUSIVE
            results.append({"kappa": k, **_inconclusive_payload(exc)})
            rows.append((k, "query", "Inconclusive", None, None, exc.basis))
            continue
        results.append(q.to_dict())
        for name in ("two_sided_limsup", "one_sided_limsup", "one_sided_liminf", "limit"):
            rows.append(_cls_row(k, name, getattr(q, name)))
    em.json({"spec": spec.to_dict(), "results": results})
    em.csv(["kappa", "quantity", "kind", "value", "reason", "basis"], rows)
    return status, results


TESTS = ("condition_2", "cond2", "condition_2_positive", "condition_2_negative", "I", "J",
         "K", "5.1", "33b")


def _run_test(cfg, m):
    name = cfg.need("test")
    if name not in TESTS:
        raise ConfigError(f"invalid parameter: test={name!r}")
    if name == "I":
        return it.I_test(m, float(cfg.need("param")))
    if name == "33b":
        return it.test_33b(m)
    kappa = float(cfg.need("kappa"))
    if name in ("condition_2", "cond2"):
        return it.test_condition_2(m, kappa)
    if name.startswith("condition_2_"):
        return it.one_side_condition_2(m, kappa, name.rsplit("_", 1)[1])
    if name == "J":
        side = cfg.parameters.get("side") or "negative"
        return it.J_test(m, float(cfg.need("param")), kappa, side)
    if name == "K":
        return it.K_test(m, float(cfg.need("param")), kappa)
    return it.test_5_1(m, kappa)


def _cmd_test(cfg, spec, em):
    v = _run_test(cfg, spec.jump)
    em.json(v.to_dict())
    rows = [(j, b) for j, b in enumerate(v.log_blocks)]
    em.csv(["block", "log_block"], rows)
    return (EXIT_INCONCLUSIVE if v.inconclusive else EXIT_OK), v


def _cmd_critical(cfg, spec, em):
    name = cfg.need("test")
    m = spec.jump
    if name == "I":
        fn = lambda: it.lambda_I_star(m)  # noqa: E731
    elif name == "J":
        kappa = float(cfg.need("kappa"))
        side = cfg.parameters.get("side") or "negative"
        fn = lambda: it.lambda_J_star(m, kappa, side)  # noqa: E731
    elif name in ("K", "K_T"):
        kappa = float(cfg.need("kappa"))
        fn = lambda: it.d_K_star(m, kappa)  # noqa: E731
    else:
        raise ConfigError(f"invalid parameter: test={name!r}")
    try:
        c = fn()
    except InconclusiveBracket as exc:
        payload = {"outcome": "Inconclusive", "message": str(exc)}
        if exc.verdict is not None:
            payload["verdict"] = exc.verdict.to_dict(trace=False)
        em.json(payload)
        return EXIT_INCONCLUSIVE, payload
    d = c.to_dict()
    em.json(d)
    em.csv(["lo", "hi", "value", "verdict_lo", "verdict_hi"],
           [(c.bracket[0], c.bracket[1], c.value, d["verdict_lo"], d["verdict_hi"])])
    return EXIT_OK, c


def _functional_kind(name, kappa):
    if name in ("W_positive", "W_negative"):
        return FunctionalKind("W_side", side=name.split("_")[1])
    if name in ("rho", "rho_kappa"):
        if kappa is None:
            raise ConfigError("missing parameter: kappa")
        return FunctionalKind("rho_kappa", kappa=float(kappa))
    try:
        return FunctionalKind(name)
    except LevyError:
        raise ConfigError(f"invalid parameter: name={name!r}") from None


def _cmd_functional(cfg, spec, em):
    p = cfg.parameters
    k = _functional_kind(cfg.need("name"), p.get("kappa"))
    xs = geometric_grid(int(p.get("points") or 50), float(p.get("x_min") or 1e-12))
    ys = [float(eval_functional(spec.jump, k, x)) for x in xs]
    em.csv(["x", k.label], list(zip(xs.tolist(), ys)))
    em.json({"functional": k.label, "x": xs, "values": ys})
    return EXIT_OK, ys


def _sim_config(cfg) -> SimConfig:
    p = cfg.parameters
    try:
        return SimConfig(r=float(p.get("r") or 0.5), N=int(p.get("depth") or 20),
                         paths=int(p.get("paths") or 100), seed=int(p.get("seed") or 0),
                         cutoff_scale=float(p.get("cutoff_scale") or 1.0),
                         gaussian_refinement=not p.get("no_refinement"))
    except ValueError as exc:
        raise ConfigError(f"invalid parameter: {exc}") from None


def _cmd_simulate(cfg, spec, em):
    kappa = float(cfg.need("kappa"))
    sim = _sim_config(cfg)
    mode = cfg.parameters.get("mode") or "absolute"
    if mode not in ("signed", "absolute"):
        raise ConfigError(f"invalid parameter: mode={mode!r}")
    grids = sample_paths(spec, sim)
    rep = trend_statistic(spec, sim, kappa, mode, grids=grids)
    em.csv(["depth", "t", "median_stat", "q75_stat"], rep.rows())
    em.json(rep.to_dict())
    if cfg.parameters.get("dump_paths"):
        rows = [(i, n, t, x) for i, g in enumerate(grids) for n, t, x in g.values]
        em.csv(["path", "n", "t", "x"], rows, command="paths", force=True)
    status = EXIT_INCONCLUSIVE if rep.verdict == "inconclusive" else EXIT_OK
    return status, rep


def _cmd_sweep(cfg, spec, em):
    p = cfg.parameters
    kappas = _grid(p.get("kappa_grid") or cfg.need("kappa_grid"))
    rows, status = [], EXIT_OK
    for k in kappas:
        row = [k]
        for fn in (classifier.classify_two_sided, classifier.classify_one_sided,
                   classifier.classify_limit):
            try:
                row.append(fn(spec, k).kind)
            except InconclusiveClassification:
                row.append("Inconclusive")
                status = EXIT_INCONCLUSIVE
        rows.append(tuple(row))
    em.csv(["kappa", "two_sided_limsup", "one_sided_limsup", "limit"], rows)
    em.json({"spec": spec.to_dict(),
             "rows": [dict(zip(("kappa", "two_sided_limsup", "one_sided_limsup", "limit"), r))
                      for r in rows]})
    return status, rows


_DISPATCH = {"classify": _cmd_classify, "test": _cmd_test, "critical": _cmd_critical,
             "functional": _cmd_functional, "simulate": _cmd_simulate, "sweep": _cmd_sweep}


def run(cfg: RunConfig) -> RunResult:
    """Execute one command; errors surface as exceptions (see :func:`main`)."""
    cfg.validate()
    try:
        spec: LevyProcessSpec = load_spec(cfg.spec_path)
    except (ValueError, LevyError) as exc:
        raise ConfigError(f"invalid parameter: spec ({exc})") from None
    em = _Emitter(cfg)
    status, payload = _DISPATCH[cfg.command](cfg, spec, em)
    return RunResult(status, em.files, payload)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levy-smalltime",
                     description="Small-time behaviour of Levy processes against t^kappa.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--spec", "--measure", dest="spec",
                       help="JSON process or measure specification")
        p.add_argument("--out", default="reports", help="output directory")
        p.add_argument("--format", default="both", choices=FORMATS)

    p = sub.add_parser("classify", help="classify limsup/liminf/lim of X_t/t^kappa")
    common(p)
    p.add_argument("--kappa", type=float)
    p.add_argument("--all-kappa", help="grid 'lo:hi:step' or comma list")
    p.add_argument("--w-side", choices=("negative", "positive"))
    p.add_argument("--subordinator", action="store_true",
                   help="subordinator liminf test; --kappa is the exponent gamma")

    p = sub.add_parser("test", help="run one integral test")
    common(p)
    p.add_argument("--test", choices=TESTS)
    p.add_argument("--kappa", type=float)
    p.add_argument("--param", type=float, help="a for I, lambda for J, d for K")
    p.add_argument("--side", choices=("negative", "positive"))

    p = sub.add_parser("critical", help="critical constant of I, J or K")
    common(p)
    p.add_argument("--test", choices=("I", "J", "K", "K_T"))
    p.add_argument("--kappa", type=float)
    p.add_argument("--side", choices=("negative", "positive"))

    p = sub.add_parser("functional", help="tabulate a functional on a geometric grid")
    common(p)
    p.add_argument("--name")
    p.add_argument("--kappa", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--x-min", type=float)

    p = sub.add_parser("simulate", help="Monte Carlo trend statistics")
    common(p)
    p.add_argument("--kappa", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--depth", type=int)
    p.add_argument("--paths", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("signed", "absolute"))
    p.add_argument("--cutoff-scale", type=float)
    p.add_argument("--no-refinement", action="store_true")
    p.add_argument("--dump-paths", action="store_true")

    p = sub.add_parser("sweep", help="classification across a kappa grid")
    common(p)
    p.add_argument("--kappa-grid")
    return parser


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise ConfigError("missing parameter: command")
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "spec", "out", "format") and v not in (None, False)}
    return RunConfig(args.command, args.spec or "", params, args.out, args.format)


def main(argv=None) -> int:
    try:
        result = run(config_from_args(sys.argv[1:] if argv is None else argv))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (LevyError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for path in result.files:
        print(path)
    if result.status == EXIT_INCONCLUSIVE:
        print("Inconclusive verdict; see the report for diagnostics", file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
