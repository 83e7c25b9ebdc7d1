"""sigma235 command line.

    sigma235 bounds | reduce --case div | tables --format md | solve --brute-box 20
    sigma235 factor 2 89 | order 3 31 | sanity --bound 200

Everything is written to stdout as JSON (sorted keys, ``schema_version``) or
Markdown.  Exit codes: 0 ok, 1 unresolved or unexpected candidate (or missing
factorizations), 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .factoring import BUNDLED_DB, Effort, FactorDb, ParseError, VerificationError, factor_repunit, load_factor_db

SCHEMA_VERSION = 1
DB_ENV = "SIGMA235_FACTOR_DB"
COMMANDS = ("bounds", "reduce", "tables", "solve", "factor", "order", "sanity")
MIN_C = 10**10


class ConfigError(ValueError):
    pass


def _parse_int(v: Any, name: str) -> int:
    """Integers, or strings like 10^157 / 1e157."""
    if isinstance(v, bool):
        raise ConfigError(f"{name}: expected an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        s = v.strip().replace(" ", "")
        m = re.fullmatch(r"(\d+)\^(\d+)", s) or re.fullmatch(r"(\d+)[eE](\d+)", s)
        if m:
            if "^" in s:
                return int(m[1]) ** int(m[2])
            return int(m[1]) * 10 ** int(m[2])
        if s.isdigit():
            return int(s)
    raise ConfigError(f"{name}: cannot read {v!r} as an integer")


@dataclass(frozen=True)
class RunConfig:
    precision: int | None = None          # digits of the logarithms; None picks per case
    C: dict = field(default_factory=dict)  # case -> C override
    gamma: int = 2
    delta: Fraction = Fraction(3, 4)
    db_path: str | None = None
    smooth_bound: int = 10**5
    brute_box: int = 20
    family_limit: int = 1000
    sanity_bound: int = 200
    format: str = "json"
    timings: bool = False

    def validate(self) -> "RunConfig":
        for name in ("gamma", "smooth_bound", "brute_box", "family_limit", "sanity_bound"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if self.precision is not None and (not isinstance(self.precision, int) or self.precision <= 0):
            raise ConfigError(f"precision must be a positive integer, got {self.precision!r}")
        if not Fraction(1, 4) < self.delta <= 1:
            raise ConfigError(f"delta must lie in (1/4, 1], got {self.delta}")
        from .lattice import CASE_ALIASES
        for k, v in self.C.items():
            if k not in CASE_ALIASES:
                raise ConfigError(f"C: unknown case {k!r}")
            if v < MIN_C:
                raise ConfigError(f"C[{k}] must be at least 10^10")
        if self.format not in ("json", "md"):
            raise ConfigError(f"format must be json or md, got {self.format!r}")
        return self

    def echo(self) -> dict:
        d = asdict(self)
        d["delta"] = str(self.delta)
        d["C"] = {k: str(v) for k, v in sorted(self.C.items())}
        d["db_path"] = self.db_path or "bundled"
        d.pop("timings")
        return d

    @classmethod
    def from_mapping(cls, m: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        bad = sorted(set(m) - known)
        if bad:
            raise ConfigError(f"unknown config keys: {', '.join(bad)}")
        kw = dict(m)
        if "C" in kw:
            if not isinstance(kw["C"], dict):
                raise ConfigError("C must map case names to values")
            kw["C"] = {k: _parse_int(v, f"C[{k}]") for k, v in kw["C"].items()}
        if "delta" in kw:
            try:
                kw["delta"] = Fraction(str(kw["delta"]))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"delta: {exc}") from None
        for k in ("precision", "gamma", "smooth_bound", "brute_box", "family_limit", "sanity_bound"):
            if k in kw and kw[k] is not None:
                kw[k] = _parse_int(kw[k], k)
        return cls(**kw)


def load_config(path: str | None, overrides: dict) -> RunConfig:
    base: dict = {}
    if path:
        try:
            base = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path}: {exc}") from None
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
    merged = {**base, **{k: v for k, v in overrides.items() if v is not None}}
    if "C" in base and "C" in overrides and overrides["C"]:
        merged["C"] = {**base["C"], **overrides["C"]}
    return RunConfig.from_mapping(merged).validate()


@dataclass
class PipelineReport:
    command: str
    config: RunConfig
    sections: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    markdown: str = ""
    diagnostic: str = ""

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": self.command,
               "config": self.config.echo(), **self.sections}
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        if self.config.timings:
            out["timings_s"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


class _Timer:
    def __init__(self, report: PipelineReport, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.t = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.name] = time.perf_counter() - self.t


def resolve_db(cfg: RunConfig) -> FactorDb:
    path = cfg.db_path or os.environ.get(DB_ENV) or str(BUNDLED_DB)
    try:
        return load_factor_db(path)
    except OSError as exc:
        raise ConfigError(f"cannot read factor table {path}: {exc.strerror}") from None
    except (ParseError, VerificationError) as exc:
        raise ConfigError(f"factor table {path}: {exc}") from None


# -- commands -----------------------------------------------------------------------

def _chain(cfg: RunConfig):
    from .lattice import reduction_chain

    return reduction_chain(cfg.gamma, cfg.C or None, cfg.delta, cfg.precision)


def _bounds(cfg: RunConfig, rep: PipelineReport) -> None:
    from .baker import lemma31_constants, lemma33_global
    from .mparith import format_sci

    with _Timer(rep, "constants"):
        consts = lemma31_constants()
    with _Timer(rep, "global"):
        glob = lemma33_global(consts)
    cases = []
    lines = ["# Bounds", "", "## Linear forms in three logarithms", ""]
    for c in consts.cases:
        d = {"i": c.i, "K_prime": format_sci(c.K_rounded, 4), "rho": str(float(c.amplification)),
             f"C_{c.i}": format_sci(c.C_main, 4), f"C_{c.i + 3}": str(float(c.C_shift))}
        cases.append(d)
        lines.append(f"- i = {c.i}: K' = {d['K_prime']}, rho = {d['rho']}, "
                     f"C_{c.i} = {d[f'C_{c.i}']}, C_{c.i + 3} = {d[f'C_{c.i + 3}']}")
    lines += ["", "## Global bounds", ""]
    certs = {}
    for name, cert in sorted(glob.certificates.items()):
        certs[name] = cert.to_dict()
    for cert in glob.as_list():
        lines.append(f"- {cert.name} < {format_sci(cert.fraction, 4)}")
        lines += [f"    - {s}" for s in cert.derivation]
    rep.sections["constants"] = {"cases": cases,
                                 "C": {str(k): format_sci(v, 4) for k, v in sorted(consts.C.items())}}
    rep.sections["certificates"] = certs
    rep.markdown = "\n".join(lines) + "\n"


def _reduce(cfg: RunConfig, rep: PipelineReport, case: str) -> None:
    from .lattice import CASE_ALIASES

    with _Timer(rep, "reduction"):
        ch = _chain(cfg)
    want = CASE_ALIASES[case]
    out = {o.case: o for o in ch.outcomes()}[want]
    rep.sections["reduction"] = out.to_dict()
    rep.sections["exponent_caps"] = {str(k): v for k, v in sorted(ch.caps.items())}
    rep.markdown = (f"# Reduction ({want})\n\n" + "\n".join(f"- {s}" for s in out.derivation)
                    + f"\n\nlog x < {float(out.bound)}\n")


def _check_db(db: FactorDb, bounds) -> None:
    from .sieve import MissingFactorization, required_factorizations

    missing = [p for p in required_factorizations(bounds) if db.get(*p) is None]
    if missing:
        raise MissingFactorization(missing)


def _surveys(cfg: RunConfig, rep: PipelineReport):
    from .sieve import survey_all

    with _Timer(rep, "reduction"):
        ch = _chain(cfg)
    bounds = (ch.prime_power_bound, ch.two_prime_bound)
    db = resolve_db(cfg)
    _check_db(db, bounds)
    with _Timer(rep, "survey"):
        surveys = survey_all(db, bounds)
    rep.sections["surveys"] = {str(a): s.to_dict() for a, s in sorted(surveys.items())}
    return db, bounds, surveys


def _tables(cfg: RunConfig, rep: PipelineReport) -> None:
    from .sieve import make_tables, tables_markdown

    _, _, surveys = _surveys(cfg, rep)
    with _Timer(rep, "tables"):
        rows = make_tables(surveys, cfg.smooth_bound)
    rep.sections["tables"] = [r.to_dict() for r in rows]
    rep.markdown = tables_markdown(rows)


def _solve(cfg: RunConfig, rep: PipelineReport, brute: int | None) -> int:
    from .sieve import brute_box, families_in_box, solve

    db, bounds, surveys = _surveys(cfg, rep)
    with _Timer(rep, "elimination"):
        res = solve(db, bounds, cfg.family_limit, surveys=surveys)
    rep.sections["solve"] = res.to_dict()
    lines = ["# Solutions", ""]
    for f in res.families:
        abc = ", ".join("b" if x is None else str(x) for x in f.abc)
        extra = f" with {f.condition}; b <= {cfg.family_limit}: {list(f.members)}" if f.kind == "parametric" else ""
        lines.append(f"- ({f.label}) (a, b, c) = ({abc}){extra}")
    ok = res.matches_theorem
    if brute:
        with _Timer(rep, "brute_box"):
            box = brute_box(brute)
        fam = families_in_box(brute)
        rep.sections["brute_box"] = {"n": brute, "found": [list(t) for t in box],
                                     "agrees_with_families": box == fam}
        lines.append(f"\nBrute force a, b, c <= {brute}: {len(box)} solutions, "
                     f"{'agrees' if box == fam else 'DISAGREES'} with the families.")
        ok = ok and box == fam
    lines += [f"\n{sum(e.eliminated for e in res.eliminations)} of {len(res.eliminations)} candidates eliminated outright."]
    rep.markdown = "\n".join(lines) + "\n"
    if not ok:
        rep.diagnostic = "solution set differs from the expected families"
        return 1
    return 0


def _factor(cfg: RunConfig, rep: PipelineReport, base: int, exp: int) -> None:
    if base < 2 or exp < 1:
        raise ConfigError("factor needs base >= 2 and exponent >= 1")
    rec = None
    db = resolve_db(cfg)
    rec = db.get(base, exp)
    source = "table"
    if rec is None:
        rec = factor_repunit(base, exp, Effort(cfg.smooth_bound))
        source = "computed"
    rep.sections["record"] = {"base": base, "exponent": exp, "source": source, **rec.to_dict()}
    rep.markdown = f"(({base}^{exp} - 1)/{base - 1}) = {rec.display()}\n"


def _order(cfg: RunConfig, rep: PipelineReport, a: int, q: int, B: int | None) -> None:
    from .factoring import is_prime
    from .orders import multiple_fact

    if q < 2 or not is_prime(q):
        raise ConfigError(f"q = {q} is not prime")
    if a % q == 0:
        raise ConfigError(f"{q} divides {a}: no order")
    fact = multiple_fact(a, q, B or cfg.smooth_bound)
    rep.sections["order"] = fact.to_dict()
    rep.markdown = f"o_{q}({a}) = {fact.cell()}\n"


def _sanity(cfg: RunConfig, rep: PipelineReport) -> int:
    from .sieve import sanity_known_results

    with _Timer(rep, "sanity"):
        res = sanity_known_results(cfg.sanity_bound)
    rep.sections["sanity"] = json.loads(json.dumps(res.to_dict(), default=list))
    rep.markdown = "\n".join(f"- {k}: {'ok' if v['ok'] else 'FAILED'} ({v.get('range', '')})"
                             for k, v in res.checks.items()) + "\n"
    return 0 if res.ok else 1


def run(command: str, config: RunConfig, **args) -> tuple[PipelineReport, int]:
    from .sieve import MissingFactorization, UnexpectedSurvivor, UnresolvedCandidate

    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    rep = PipelineReport(command, config)
    code = 0
    try:
        if command == "bounds":
            _bounds(config, rep)
        elif command == "reduce":
            _reduce(config, rep, args.get("case", "div"))
        elif command == "tables":
            _tables(config, rep)
        elif command == "solve":
            code = _solve(config, rep, args.get("brute_box"))
            if args.get("report"):
                Path(args["report"]).write_text(rep.to_json(), encoding="utf-8")
        elif command == "factor":
            _factor(config, rep, args["base"], args["exp"])
        elif command == "order":
            _order(config, rep, args["a"], args["q"], args.get("smooth_bound"))
        elif command == "sanity":
            code = _sanity(config, rep)
    except MissingFactorization as exc:
        rep.diagnostic = str(exc)
        rep.sections["missing_factorizations"] = [list(p) for p in exc.missing]
        return rep, 1
    except (UnresolvedCandidate, UnexpectedSurvivor) as exc:
        rep.diagnostic = f"{type(exc).__name__}: {exc}"
        return rep, 1
    return rep, code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sigma235", description="sigma(2^a), sigma(3^b), sigma(5^c) sharing two primes")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags win)")
    common.add_argument("--db", dest="db_path", help=f"factor table (default ${DB_ENV} or bundled)")
    common.add_argument("--format", choices=("json", "md"))
    common.add_argument("--precision", type=int, help="digits of the lattice logarithms")
    common.add_argument("--gamma", type=int)
    common.add_argument("--delta", help="LLL parameter, e.g. 3/4")
    common.add_argument("--C", action="append", default=[], metavar="CASE=VALUE",
                        help="lattice constant per case, e.g. div=10^111")
    common.add_argument("--timings", action="store_true", default=None, help="add stage timings to the report")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("bounds", parents=[common], help="linear-form constants and global bounds")
    p = sub.add_parser("reduce", parents=[common], help="one lattice reduction step")
    p.add_argument("--case", choices=("first", "nodiv", "div"), default="div")
    sub.add_parser("tables", parents=[common], help="residual order tables")
    p = sub.add_parser("solve", parents=[common], help="full elimination and solution families")
    p.add_argument("--brute-box", type=int, dest="brute_box")
    p.add_argument("--report", help="also write the JSON report here")
    p.add_argument("--family-limit", type=int, dest="family_limit")
    p = sub.add_parser("factor", parents=[common], help="factorization record of (a^e - 1)/(a - 1)")
    p.add_argument("base", type=int)
    p.add_argument("exp", type=int)
    p = sub.add_parser("order", parents=[common], help="multiplicative order of a modulo prime q")
    p.add_argument("a", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--smooth-bound", type=int, dest="smooth_bound")
    p = sub.add_parser("sanity", parents=[common], help="classical results used as checks")
    p.add_argument("--bound", type=int, dest="sanity_bound")
    return ap


def _overrides(ns: argparse.Namespace) -> dict:
    o = {k: getattr(ns, k, None) for k in ("db_path", "format", "precision", "gamma", "delta",
                                           "smooth_bound", "brute_box", "family_limit",
                                           "sanity_bound", "timings")}
    C = {}
    for item in ns.C:
        if "=" not in item:
            raise ConfigError(f"--C expects CASE=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        C[k] = v
    o["C"] = C or None
    return o


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = load_config(ns.config, _overrides(ns))
        args = {k: getattr(ns, k) for k in ("case", "brute_box", "report", "base", "exp", "a", "q",
                                             "smooth_bound") if hasattr(ns, k)}
        if ns.command == "solve" and args.get("brute_box") is None:
            args["brute_box"] = cfg.brute_box
        rep, code = run(ns.command, cfg, **args)
    except ConfigError as exc:
        print(f"sigma235: config error: {exc}", file=sys.stderr)
        return 2
    if cfg.format == "md" and rep.markdown and not rep.diagnostic:
        sys.stdout.write(rep.markdown)
    else:
        sys.stdout.write(rep.to_json())
    if rep.diagnostic:
        print(f"sigma235: {rep.diagnostic}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
