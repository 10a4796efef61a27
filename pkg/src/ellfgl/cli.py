"""Command-line front end: reproducible, canonical reports with exit codes.

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage error,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields

from ellfgl.algebra import prime_power_base
from ellfgl.errors import ResourceGuardError, UsageError, VerificationError
from ellfgl.fgl import (
    assoc_defect,
    buchstaber_registry,
    check_exponential,
    fgl_exp,
    fgl_log,
    generic_buchstaber,
    tate_exp_via_wp,
    tate_fgl,
    tate_s,
)
from ellfgl.genus import cpn_coefficients, hirzebruch_defect, krichever_fit
from ellfgl.gradedring import FAMILIES, DEFAULT_GUARD, build_presentation, graded_piece, rho
from ellfgl.levels import TATE_VARIANTS, form_certificate, solve_universal, solved_defect, tate_specialization
from ellfgl.polyring import PolyRing

COMMANDS = (
    "expand",
    "assoc",
    "log-exp",
    "tate-s",
    "tate-exp-check",
    "level-verify",
    "solve-level",
    "rho-table",
    "graded",
    "torsion",
    "krichever-fit",
    "hfe",
    "cpn",
)
LAW_FAMILIES = ("buchstaber", "tate", "level", "level2", "level3")


@dataclass
class RunConfig:
    order: int = 10
    W: int = 10
    family: str = "tate"
    ring: str = "RB"
    N: int | None = None
    n: int = 3
    max_n: int | None = None
    weight: int | None = None
    variant: str = "printed"
    out: str | None = None
    format: str = "json"
    guard: int = DEFAULT_GUARD
    fixture: str | None = None
    seedless: bool = True

    def validate(self):
        if self.order < 2:
            raise UsageError("--order must be >= 2")
        if self.W < 1:
            raise UsageError("--W must be >= 1")
        if self.N is not None and self.N not in (2, 3, 4, 5, 6):
            raise UsageError("--N must be in 2..6")
        if self.format not in ("json", "text"):
            raise UsageError("--format must be json or text")
        if self.variant not in TATE_VARIANTS:
            raise UsageError(f"--variant must be one of {TATE_VARIANTS}")


class Outcome:
    def __init__(self, report: dict, failure: str | None = None):
        self.report = report
        self.failure = failure


# ---------------------------------------------------------------------------
# reference tables (the values the checks compare against)


def _is_prime_power(n: int) -> bool:
    return n >= 2 and prime_power_base(n) > 1


def _two_power(n: int, min_exp: int) -> bool:
    return n >= 2 ** min_exp and n & (n - 1) == 0


def reference_rho(ring: str, n: int, N: int | None = None):
    """Expected order of ``e_n``; ``"inf"`` for infinity, ``None`` if no claim."""
    if ring == "RB":
        if n <= 4:
            return "inf"
        if _is_prime_power(n):
            return prime_power_base(n)
        if _two_power(n + 2, 3):
            return 2
        return 1
    if ring == "R2":
        if n in (2, 4):
            return "inf"
        return 2 if _two_power(n, 3) else 1
    if ring == "R3":
        if n in (1, 3):
            return "inf"
        return 3 if n >= 9 and _is_prime_power(n) and prime_power_base(n) == 3 else 1
    if ring == "R4":
        table = {1: "inf", 2: "inf", 3: 4, 4: 8}
        if n in table:
            return table[n]
        return 2 if _two_power(n, 3) or _two_power(n + 2, 3) else 1
    if ring == "RB_mod_JN":
        killed = {2: {1: 1, 3: 1}, 3: {2: 1, 4: 1}, 4: {3: 4, 4: 8}}
        if N not in killed:
            return None
        return killed[N].get(n, reference_rho("RB", n))
    return None


# ---------------------------------------------------------------------------
# helpers


def _law(cfg: RunConfig, order: int | None = None):
    order = cfg.order if order is None else order
    fam = cfg.family
    if fam == "buchstaber":
        return generic_buchstaber(order)
    if fam == "tate":
        return tate_fgl(None, order)
    if fam == "level":
        if cfg.N is None:
            raise UsageError("--family level needs --N")
        return solve_universal(cfg.N, order=order - 1).fgl
    if fam == "level2":
        return tate_specialization(2, order).tate
    if fam == "level3":
        return tate_specialization(3, order, cfg.variant).tate
    raise UsageError(f"--family must be one of {LAW_FAMILIES}")


def _poly_list(pairs):
    return [{"index": list(k) if isinstance(k, tuple) else k, "coefficient": str(c)} for k, c in pairs]


def _first(pairs, what):
    if not pairs:
        return None
    k, c = pairs[0]
    return f"{what} nonzero at {k}: {c}"


def _inf(v):
    return "inf" if v is None else v


# ---------------------------------------------------------------------------
# commands


def cmd_expand(cfg):
    F = _law(cfg)
    report = F.to_json()
    report["symmetric"] = F.is_symmetric()
    report["graded"] = F.is_graded()
    failure = None if report["symmetric"] and report["graded"] else "law is not symmetric and graded"
    return Outcome(report, failure)


def cmd_assoc(cfg):
    F = _law(cfg)
    if cfg.family == "level":
        sol = solve_universal(cfg.N, order=cfg.order - 1)
        d = solved_defect(sol)
    else:
        d = assoc_defect(F)
    return Outcome({"family": cfg.family, "order": F.order, "defect": len(d), "nonzero": _poly_list(d[:20])},
                   _first(d, "associativity defect"))


def cmd_log_exp(cfg):
    F = _law(cfg)
    g = fgl_log(F)
    f = fgl_exp(F)
    bad = check_exponential(F, f)
    back = f.compose(g.rename(("z",))).truncate(F.order)
    ident = back.coefficient((1,)) == 1 and len(back.coeffs) == 1
    report = {"family": cfg.family, "order": F.order, "log": g.to_json(), "exp": f.to_json(),
              "exp_check": len(bad), "round_trip": ident}
    failure = _first(bad, "f(x+y) - F(f(x), f(y))") or (None if ident else "f(g(u)) != u")
    return Outcome(report, failure)


TATE_S_PRINTED = {3: "1", 4: "mu1", 5: "mu1^2 + mu2", 6: "mu1^3 + 2*mu1*mu2 + mu3"}


def cmd_tate_s(cfg):
    s = tate_s(None, cfg.order)
    got = {k: str(s.coefficient((k,))) for k in range(0, cfg.order + 1)}
    failure = None
    for k, want in TATE_S_PRINTED.items():
        if k <= cfg.order and str(s.coefficient((k,)).ring.parse(want)) != got[k]:
            failure = failure or f"u^{k}: expected {want}, got {got[k]}"
    if any(got[k] != "0" for k in range(3)):
        failure = failure or "s(u) has terms below u^3"
    return Outcome({"order": cfg.order, "coefficients": {str(k): v for k, v in got.items()}}, failure)


def cmd_tate_exp_check(cfg):
    ring = PolyRing(tate_fgl(None, 2).ring.registry, "QQ")
    F = tate_fgl(None, cfg.order, ring)
    f1 = fgl_exp(F)
    f2 = tate_exp_via_wp(None, cfg.order, ring)
    diff = sorted((f1 - f2).coeffs.items())
    report = {"order": cfg.order, "exp": f1.to_json(), "mismatches": _poly_list(diff)}
    return Outcome(report, _first(diff, "exponential mismatch"))


def cmd_level_verify(cfg):
    if cfg.N is None:
        raise UsageError("level-verify needs --N")
    order = min(cfg.order, 10)
    sol = solve_universal(cfg.N, order=order)
    cert_order = order if cfg.N == 3 else min(order, 8)
    cert = form_certificate(sol, cert_order)
    defect = solved_defect(sol)
    report = {"N": cfg.N, "solve": sol.to_json(), "form": cert.to_json(), "defect": len(defect)}
    failure = _first(defect, "associativity defect") or (cert.failures[0] if cert.failures else None)
    if cfg.N in (2, 3):
        ts = tate_specialization(cfg.N, min(order, 8), cfg.variant)
        report["tate"] = {
            "variant": cfg.variant if cfg.N == 3 else "printed",
            "mu": {k: str(v) for k, v in sorted(ts.mu.items())},
            "identity_residual": _poly_list(ts.identity_residual),
            "differences": _poly_list(ts.differences),
        }
        failure = failure or _first(ts.identity_residual, "series identity") or _first(ts.differences, "Tate vs Buchstaber")
    return Outcome(report, failure)


def cmd_solve_level(cfg):
    if cfg.N is None:
        raise UsageError("solve-level needs --N")
    sol = solve_universal(cfg.N, order=cfg.order)
    defect = solved_defect(sol)
    report = sol.to_json()
    report["defect"] = len(defect)
    return Outcome(report, _first(defect, "associativity defect"))


def _fixture_relations(cfg, pres_ring):
    if not cfg.fixture:
        return []
    try:
        with open(cfg.fixture) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read fixture {cfg.fixture}: {exc}") from exc
    return [pres_ring.parse(t) for t in data.get("extra_relations", [])]


def cmd_rho_table(cfg):
    max_n = cfg.max_n or cfg.W
    if cfg.ring not in FAMILIES:
        raise UsageError(f"--ring must be one of {FAMILIES}")
    reg = buchstaber_registry(max_n, a=cfg.ring != "R2", b=cfg.ring != "R3")
    extra = _fixture_relations(cfg, PolyRing(reg, "ZZ"))
    pres = build_presentation(cfg.ring, max_n, cfg.N, linear_only=True, extra_relations=extra)
    rows, failure = [], None
    for n in range(1, max_n + 1):
        got = _inf(rho(pres, n))
        want = reference_rho(cfg.ring, n, cfg.N)
        ok = want is None or got == want
        rows.append({"n": n, "rho": got, "expected": want, "ok": ok})
        if not ok and failure is None:
            failure = f"rho({n}) = {got}, expected {want}"
    return Outcome({"ring": pres.label(), "max_n": max_n, "table": rows}, failure)


def cmd_graded(cfg):
    pres = build_presentation(cfg.ring, cfg.W, cfg.N)
    weights = [cfg.weight] if cfg.weight else range(1, cfg.W + 1)
    return Outcome({"ring": pres.label(), "W": cfg.W, "pieces": [graded_piece(pres, w, cfg.guard).to_json() for w in weights]})


def cmd_torsion(cfg):
    ring = cfg.ring
    W = min(cfg.W, 8) if ring in ("R2", "R3", "RB") else max(cfg.W, 3) if ring == "R4" else cfg.W
    pres = build_presentation(ring, W, cfg.N)
    pieces, failure = [], None
    for w in range(1, W + 1):
        classes = [pres.ring.parse("A1^3 - 2*A1*B2 + B3")] if ring == "R4" and w == 3 else []
        rep = graded_piece(pres, w, cfg.guard, classes)
        pieces.append(rep.to_json())
        if failure:
            continue
        if ring in ("R2", "R3") and not rep.is_free:
            failure = f"weight {w}: torsion {rep.invariant_factors}"
        elif ring == "RB" and any(x != 2 for x in rep.invariant_factors):
            failure = f"weight {w}: invariant factors {rep.invariant_factors} beyond 2"
        elif ring == "R4" and w == 3 and (rep.invariant_factors != [2] or list(rep.classes.values()) != [2]):
            failure = f"weight 3: torsion {rep.invariant_factors}, class orders {rep.classes}"
    return Outcome({"ring": pres.label(), "W": W, "pieces": pieces}, failure)


def _exponential(cfg, order):
    return fgl_exp(_law(cfg, order))


def cmd_krichever_fit(cfg):
    f = _exponential(cfg, cfg.order + 2)
    fit = krichever_fit(f)
    report = {"family": cfg.family, **fit.to_json()}
    if cfg.family == "level3":
        report["variant"] = cfg.variant
    return Outcome(report, _first(fit.residuals, "Krichever residual"))


def cmd_hfe(cfg):
    order = min(cfg.order, 6) if cfg.n >= 3 else cfg.order
    f = _exponential(cfg, order + cfg.n)
    d = hirzebruch_defect(f, cfg.n, order)
    return Outcome({"family": cfg.family, **d.to_json()}, _first(d.defect, "Hirzebruch defect"))


def cmd_cpn(cfg):
    F = _law(cfg, cfg.order + 1)
    rows = cpn_coefficients(F, cfg.order)
    bad = [(n, v) for n, v, ok in rows if not ok]
    report = {"family": cfg.family, "values": [{"n": n, "value": str(v), "integral": ok} for n, v, ok in rows]}
    return Outcome(report, _first(bad, "non-integral CP^n value"))


HANDLERS = {
    "expand": cmd_expand,
    "assoc": cmd_assoc,
    "log-exp": cmd_log_exp,
    "tate-s": cmd_tate_s,
    "tate-exp-check": cmd_tate_exp_check,
    "level-verify": cmd_level_verify,
    "solve-level": cmd_solve_level,
    "rho-table": cmd_rho_table,
    "graded": cmd_graded,
    "torsion": cmd_torsion,
    "krichever-fit": cmd_krichever_fit,
    "hfe": cmd_hfe,
    "cpn": cmd_cpn,
}


# ---------------------------------------------------------------------------
# driver


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ellfgl", description="Exact formal group law expansions and checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--order", type=int)
    p.add_argument("--W", type=int)
    p.add_argument("--family", choices=LAW_FAMILIES)
    p.add_argument("--ring", choices=FAMILIES)
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int, help="number of variables for hfe")
    p.add_argument("--max-n", dest="max_n", type=int)
    p.add_argument("--weight", type=int)
    p.add_argument("--variant", choices=TATE_VARIANTS)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--guard", type=int, help="monomial cap for graded pieces")
    p.add_argument("--fixture", help="JSON file with extra relations for rho-table")
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--seedless", action="store_true", help="no-op: nothing here is random")
    return p


def make_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = RunConfig(**{**asdict(cfg), **data})
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and v is not False:
            setattr(cfg, f.name, v)
    cfg.validate()
    return cfg


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines = []
    _text(report, "", lines)
    width = max((len(k) for k, _ in lines), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in lines)


def _text(obj, prefix, lines):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _text(obj[k], f"{prefix}.{k}" if prefix else str(k), lines)
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            _text(x, f"{prefix}[{i}]", lines)
    else:
        lines.append((prefix, json.dumps(obj, sort_keys=True, ensure_ascii=False) if not isinstance(obj, str) else obj))


def run(argv=None) -> tuple[int, str]:
    """Run one command; returns ``(exit code, rendered report)``."""
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        cfg = make_config(args)
        fmt = cfg.format
        outcome = HANDLERS[args.command](cfg)
        report = {"command": args.command, "ok": outcome.failure is None, "report": outcome.report}
        if outcome.failure:
            report["failure"] = outcome.failure
        code = 0 if outcome.failure is None else 1
        text = render(report, fmt)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        return code, text
    except UsageError as exc:
        return 2, render({"ok": False, "error": "usage", "message": str(exc)}, fmt)
    except VerificationError as exc:
        return 1, render({"ok": False, "error": "verification", "message": str(exc)}, fmt)
    except ResourceGuardError as exc:
        return 3, render({"ok": False, "error": "resource", "message": str(exc)}, fmt)


def main(argv=None) -> int:
    code, text = run(argv)
    (sys.stderr if code == 2 else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
