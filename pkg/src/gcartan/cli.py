"""Command-line frontend.

Commands: gram, det, verify, irred, twisted, snf, invariants, report, table.
Global flags: --format {json|csv|latex}, --cache-dir PATH, --workers N,
--force.  GCART_CACHE_DIR overrides the cache location.  Exit codes:
0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from . import invariants as inv
from . import partitions as pt
from . import qcartan as qc
from . import snf as snf_mod
from .gram import block_sum, cartan_graded, gram_det, gram_matrix
from .linalg import int_det, laurent_det
from .qlaurent import LaurentPoly, normalize_unit, quantum_int


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def poly_latex(p: LaurentPoly) -> str:
    """Render a Laurent polynomial, recognizing quantum brackets [n]_s."""
    if p.is_zero:
        return "0"
    n = len(p)
    if p == LaurentPoly.const(1):
        return "1"
    if n >= 2 and p.max_exp % (n - 1) == 0:
        s = p.max_exp // (n - 1)
        if s >= 1 and p == quantum_int(n, s):
            return f"[{n}]" if s == 1 else f"[{n}]_{{{s}}}"
    bits = []
    for e, c in sorted(p.terms.items(), reverse=True):
        coeff = "" if abs(c) == 1 and e != 0 else str(abs(c))
        if e == 0:
            body = str(abs(c))
        elif e == 1:
            body = f"{coeff}v"
        else:
            body = f"{coeff}v^{{{e}}}"
        bits.append(("+ " if c > 0 else "- ") + body if bits else ("-" + body if c < 0 else body))
    return " ".join(bits)


def _entry_str(p: LaurentPoly) -> str:
    if p.is_zero:
        return "0"
    return " + ".join(f"{c}*v^{e}" for e, c in sorted(p.terms.items(), reverse=True))


def _matrix_csv(out, index, entries) -> None:
    import csv as _csv

    w = _csv.writer(out, lineterminator="\n")
    w.writerow(["index"] + [_cp_str(cp) for cp in index])
    for cp, row in zip(index, entries):
        w.writerow([_cp_str(cp)] + [_entry_str(e) for e in row])


def _cp_str(cp) -> str:
    if not cp:
        return "()"
    return " ".join(f"{s}.{c}" for s, c in cp)


def _matrix_latex(out, index, entries) -> None:
    out.write("\\begin{pmatrix}\n")
    for row in entries:
        out.write(" & ".join(poly_latex(e) for e in row) + " \\\\\n")
    out.write("\\end{pmatrix}\n")


def _emit(args, payload: dict, csv_fn=None, latex_fn=None) -> str:
    if args.format == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    if args.format == "csv":
        if csv_fn is None:
            raise UsageError("this command has no csv rendering")
        csv_fn(buf)
    elif args.format == "latex":
        if latex_fn is None:
            raise UsageError("this command has no latex rendering")
        latex_fn(buf)
    else:
        raise UsageError(f"unknown format {args.format}")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


class DiskCache:
    """Content-addressed output cache; atomic write-temp-then-rename."""

    def __init__(self, root: Path | None):
        self.root = root

    def key(self, *parts) -> str:
        h = hashlib.sha256()
        h.update(__version__.encode())
        for p in parts:
            h.update(b"\0" + str(p).encode())
        return h.hexdigest()

    def get(self, key: str) -> str | None:
        if self.root is None:
            return None
        f = self.root / key[:2] / key
        if f.is_file():
            return f.read_text()
        return None

    def put(self, key: str, text: str) -> None:
        if self.root is None:
            return
        d = self.root / key[:2]
        d.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, d / key)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _cache_from(args) -> DiskCache:
    root = args.cache_dir or os.environ.get("GCART_CACHE_DIR")
    if root is None:
        default = Path.home() / ".cache" / "gcart"
        return DiskCache(default)
    if root == "":
        return DiskCache(None)
    return DiskCache(Path(root))


def _cached_gram(args, ell_or_dg, d):
    """Gram matrices are cached at matrix granularity as JSON."""
    cache = _cache_from(args)
    if isinstance(ell_or_dg, int):
        label = f"ell={ell_or_dg}"
        build = lambda: cartan_graded(ell_or_dg, d, workers=args.workers)  # noqa: E731
    else:
        label = ell_or_dg.label()
        build = lambda: gram_matrix(ell_or_dg, d, workers=args.workers)  # noqa: E731
    key = cache.key("grammatrix", label, d)
    hit = cache.get(key)
    if hit is not None:
        from .gram import GramMatrix

        return GramMatrix.from_json(json.loads(hit))
    g = build()
    cache.put(key, json.dumps(g.to_json(), sort_keys=True))
    return g


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m for m in missing)}")


def _finite_diagram(args) -> qc.DynkinDiagram:
    if args.diagram is not None:
        dg = qc.parse_diagram(args.diagram)
        if not isinstance(dg, qc.DynkinDiagram):
            raise UsageError(f"{args.diagram} is a twisted diagram; this command needs a finite one")
        return dg
    if args.ell is not None:
        return qc.type_a(args.ell)
    raise UsageError("give either --diagram or --ell")


def _size_guard(args, colors: int, d: int) -> None:
    n = pt.u_count(colors, d)
    if n > args.limit and not args.force:
        raise UsageError(
            f"matrix would be {n} x {n} (> {args.limit}); pass --force to proceed"
        )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gram(args) -> str:
    if args.blocks is not None:
        _require(args, "ell")
        bs = block_sum(args.blocks, args.ell, workers=args.workers)
        payload = bs.to_json()
        mat = bs.matrix()
        idx = [cp for _, g in bs.blocks for cp in g.index]
        return _emit(
            args,
            payload,
            csv_fn=lambda out: _matrix_csv(out, idx, mat),
            latex_fn=lambda out: _matrix_latex(out, idx, mat),
        )
    _require(args, "d")
    if args.ell is not None and args.diagram is None:
        _size_guard(args, args.ell - 1, args.d)
        g = _cached_gram(args, args.ell, args.d)
    else:
        dg = _finite_diagram(args)
        _size_guard(args, dg.nodes, args.d)
        g = _cached_gram(args, dg, args.d)
    return _emit(
        args,
        g.to_json(),
        csv_fn=lambda out: _matrix_csv(out, g.index, g.entries),
        latex_fn=lambda out: _matrix_latex(out, g.index, g.entries),
    )


def _det_factored_parts(dg: qc.DynkinDiagram, d: int) -> list[dict]:
    parts = []
    for s in range(1, d + 1):
        n = qc.exponent_N(dg.nodes, d, s)
        if n:
            parts.append(
                {"s": s, "exponent": n, "det_factor": poly_latex(qc.det_quantized(dg, s))}
            )
    return parts


def cmd_det(args) -> str:
    _require(args, "d")
    dg = _finite_diagram(args)
    formula = qc.shapovalov_det_formula(dg, args.d)
    payload = {
        "diagram": dg.label() if args.diagram else f"ell={args.ell}",
        "d": args.d,
        "value": formula.to_json(),
        "factored": _det_factored_parts(dg, args.d),
    }
    if args.check:
        _size_guard(args, dg.nodes, args.d)
        actual = gram_det(dg, args.d, workers=args.workers)
        payload["check"] = {"gram_det_equals_formula": actual == formula}
        if actual != formula:
            payload["check"]["gram_det"] = actual.to_json()
            sys.stderr.write(
                f"determinant mismatch:\n  formula: {formula}\n  gram:    {actual}\n"
            )
            raise VerificationFailure(_emit(args, payload))

    def latex_fn(out):
        bits = [
            f"({p['det_factor']})^{{{p['exponent']}}}" for p in payload["factored"]
        ] or ["1"]
        out.write(" ".join(bits) + " = " + poly_latex(formula) + "\n")

    def csv_fn(out):
        out.write(_entry_str(formula) + "\n")

    return _emit(args, payload, csv_fn=csv_fn, latex_fn=latex_fn)


VERIFY_IDENTITIES = {
    "conjcheck": ("p", "r", "dmax"),
    "tsaigo": ("p", "r", "d", "u"),
    "saigo2": ("ell", "n"),
    "bhmulti": ("ell", "n"),
    "conjequiv": ("p", "r", "n"),
    "bunkaito": ("p", "r", "d"),
    "schur-orth": ("nmax",),
    "nformula": ("pmax", "dmax"),
    "folding": ("diagram", "tmax"),
}


def cmd_verify(args) -> str:
    name = args.identity
    if name not in VERIFY_IDENTITIES:
        raise UsageError(
            f"unknown identity {name!r}; choose from {', '.join(sorted(VERIFY_IDENTITIES))}"
        )
    _require(args, *(p for p in VERIFY_IDENTITIES[name] if p != "diagram"))
    detail: dict = {}
    if name == "conjcheck":
        ok = inv.verify_conjcheck(args.p, args.r, args.dmax)
    elif name == "tsaigo":
        ok = inv.verify_tsaigo(args.p, args.r, args.d, args.u)
    elif name == "saigo2":
        ok = inv.verify_saigo2(args.ell, args.n)
    elif name == "bhmulti":
        ok = inv.verify_bhmulti(args.ell, args.n)
    elif name == "conjequiv":
        ok = inv.verify_conjequiv(args.p, args.r, args.n)
    elif name == "bunkaito":
        rep = inv.bunkaito_decompose(args.p, args.r, args.d)
        ok = rep.verified
        detail = {"components": len(rep.components), "total": rep.total}
    elif name == "schur-orth":
        from .gram import schur_orthonormality

        ok = schur_orthonormality(args.nmax)
    elif name == "nformula":
        ok = True
        for p_ in range(2, args.pmax + 1):
            for d_ in range(args.dmax + 1):
                for s_ in range(1, d_ + 1):
                    qc.exponent_N(p_ - 1, d_, s_)  # raises on mismatch
    elif name == "folding":
        _require(args, "diagram")
        td = qc.parse_diagram(args.diagram)
        if not isinstance(td, qc.TwistedDiagram):
            raise UsageError("folding needs a twisted diagram label")
        ok = all(qc.folding_det_check(td, t) for t in range(1, args.tmax + 1))
    payload = {
        "identity": name,
        "params": {
            k: getattr(args, k)
            for k in VERIFY_IDENTITIES[name]
            if getattr(args, k, None) is not None
        },
        "ok": bool(ok),
        **detail,
    }
    text = _emit(args, payload, csv_fn=lambda out: out.write(f"{name},{ok}\n"))
    if not ok:
        raise VerificationFailure(text)
    return text


def cmd_irred(args) -> str:
    _require(args, "ell")
    dg = _finite_diagram(args)
    closed = qc.irreducible_at(dg, args.ell, "closed_form")
    payload = {"diagram": dg.label(), "ell": args.ell, "irreducible": closed, "mode": args.mode}
    if args.mode in ("exact", "both"):
        exact = qc.irreducible_at(dg, args.ell, "exact")
        payload["modes"] = {"closed_form": closed, "exact": exact}
        if exact != closed:
            raise VerificationFailure(_emit(args, payload))
    return _emit(args, payload, csv_fn=lambda out: out.write(f"{dg.label()},{args.ell},{closed}\n"))


def cmd_twisted(args) -> str:
    _require(args, "diagram", "d")
    td = qc.parse_diagram(args.diagram)
    if not isinstance(td, qc.TwistedDiagram):
        raise UsageError(f"{args.diagram} is not a twisted diagram label")
    value = qc.twisted_det_formula(td, args.d)
    payload = {
        "status": "CONJECTURAL",
        "diagram": str(td),
        "epsilon": td.epsilon,
        "d": args.d,
        "value": value.to_json(),
        "pretty": poly_latex(value),
    }
    if args.format != "json":
        sys.stderr.write("# CONJECTURAL: evaluated from an unproven closed formula\n")
    return _emit(
        args,
        payload,
        csv_fn=lambda out: out.write(_entry_str(value) + "\n"),
        latex_fn=lambda out: out.write(poly_latex(value) + "\n"),
    )


def _read_matrix(path: str):
    with open(path) as fh:
        obj = json.load(fh)
    if "rows" in obj:
        return [list(map(int, row)) for row in obj["rows"]]
    if "entries" in obj:
        return [[LaurentPoly.from_json(e) for e in row] for row in obj["entries"]]
    raise UsageError("matrix JSON needs 'rows' (integers) or 'entries' (Laurent polynomials)")


def cmd_snf(args) -> str:
    _require(args, "input", "ring")
    m = _read_matrix(args.input)
    n = len(m)
    checks: dict = {}
    if args.ring == "zint":
        if not all(isinstance(x, int) for row in m for x in row):
            raise UsageError("--ring zint needs an integer matrix ('rows')")
        ms = snf_mod.snf_int(m)
        status = "VERIFIED"
        if n <= 30:
            d = int_det(m)
            prod = 1
            for x in ms.elements:
                prod *= x
            checks["product_equals_abs_det"] = prod == abs(d)
        checks["divisibility_chain"] = all(
            b == 0 or (a != 0 and b % a == 0) for a, b in zip(ms.elements, ms.elements[1:])
        ) if all(ms.elements) else True
    elif args.ring == "qlaurent":
        if not all(isinstance(x, LaurentPoly) for row in m for x in row):
            raise UsageError("--ring qlaurent needs a Laurent matrix ('entries')")
        ms = snf_mod.snf_laurent_field(m)
        status = "VERIFIED"
        if n <= 20:
            d = laurent_det(m)
            prod = LaurentPoly.const(1)
            for x in ms.elements:
                prod = prod * x
            if d.is_zero:
                checks["product_matches_det_up_to_unit"] = prod.is_zero
            else:
                ratio_ok = (
                    not prod.is_zero
                    and normalize_unit(prod)[1] == snf_mod.canonical_poly(d, primitive=True)
                )
                checks["product_matches_det_up_to_unit"] = ratio_ok
    elif args.ring == "zlaurent":
        if not all(isinstance(x, LaurentPoly) for row in m for x in row):
            raise UsageError("--ring zlaurent needs a Laurent matrix ('entries')")
        res = snf_mod.try_diagonalize_zlaurent(m, budget=args.budget)
        if res.success:
            ms = res.diagonal
            status = "VERIFIED"
            checks["elementary_steps"] = res.steps
        else:
            payload = {
                "matrix": args.input,
                "ring": args.ring,
                "invariants": [],
                "status": "INCONCLUSIVE",
                "checks": {"elementary_steps": res.steps},
            }
            return _emit(args, payload)
    else:
        raise UsageError(f"unknown ring {args.ring!r}")
    payload = {
        "matrix": args.input,
        "ring": args.ring,
        "invariants": ms.to_json()["elements"],
        "status": status,
        "checks": checks,
    }
    if checks and not all(v for v in checks.values() if isinstance(v, bool)):
        raise VerificationFailure(_emit(args, payload))
    return _emit(args, payload)


def cmd_invariants(args) -> str:
    _require(args, "partition")
    lam = pt.partition(int(x) for x in args.partition.split(",") if x.strip())
    rows = []
    if args.p is not None and args.r is not None:
        ell = args.p**args.r
        rows.append(inv.GradedInvariant(inv.hill_invariant(args.p, args.r, lam), "Hill", (args.p, args.r), lam))
        rows.append(inv.GradedInvariant(inv.graded_hill(args.p, args.r, lam), "GradedHill", (args.p, args.r), lam))
        rows.append(inv.GradedInvariant(inv.kor_invariant(ell, lam), "KOR", (ell,), lam))
        rows.append(inv.GradedInvariant(inv.graded_kor(args.p, args.r, lam), "GradedKOR", (args.p, args.r), lam))
        rows.append(inv.GradedInvariant(inv.asy_Q(ell, lam), "ASY", (ell,), lam))
    elif args.ell is not None:
        rows.append(inv.GradedInvariant(inv.kor_invariant(args.ell, lam), "KOR", (args.ell,), lam))
        rows.append(inv.GradedInvariant(inv.composite_hill(args.ell, lam), "Hill", (args.ell,), lam))
        rows.append(inv.GradedInvariant(inv.asy_Q(args.ell, lam), "ASY", (args.ell,), lam))
    else:
        raise UsageError("give --p and --r, or --ell")
    payload = {"partition": list(lam), "invariants": [r.to_json() for r in rows]}

    def csv_fn(out):
        for r in rows:
            v = r.value if isinstance(r.value, int) else _entry_str(r.value)
            out.write(f"{r.provenance},{v}\n")

    return _emit(args, payload, csv_fn=csv_fn)


def cmd_report(args) -> str:
    _require(args, "p", "r", "d")
    rep = inv.conjecture_report(args.p, args.r, args.d, budget=args.budget, workers=args.workers)
    text = _emit(args, rep.to_json())
    if not rep.ok:
        raise VerificationFailure(text)
    return text


def cmd_table(args) -> str:
    dg = _finite_diagram(args)
    label = dg.label() if args.diagram else f"ell={args.ell}"
    rows = []
    for d in range(args.dmax + 1):
        rows.append(
            {
                "d": d,
                "dimension": pt.u_count(dg.nodes, d),
                "determinant": _det_factored_parts(dg, d),
            }
        )
    payload = {"diagram": label, "rows": rows}

    def latex_fn(out):
        out.write("\\begin{tabular}{rrl}\n  $d$ & $\\dim$ & $\\det$ \\\\ \\hline\n")
        for row in rows:
            det = " ".join(
                f"({p['det_factor']})^{{{p['exponent']}}}" for p in row["determinant"]
            ) or "1"
            out.write(f"  {row['d']} & {row['dimension']} & ${det}$ \\\\\n")
        out.write("\\end{tabular}\n")

    def csv_fn(out):
        import csv as _csv

        w = _csv.writer(out, lineterminator="\n")
        w.writerow(["d", "dimension", "determinant"])
        for row in rows:
            det = " ".join(
                f"({p['det_factor']})^{p['exponent']}" for p in row["determinant"]
            ) or "1"
            w.writerow([row["d"], row["dimension"], det])

    return _emit(args, payload, csv_fn=csv_fn, latex_fn=latex_fn)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gcart",
        description="Exact graded Cartan matrices, determinants and invariants "
        "of symmetric-group and Iwahori-Hecke blocks.",
    )
    ap.add_argument("--version", action="version", version=f"gcart {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv", "latex"], default="json")
        p.add_argument("--cache-dir", default=None, help="cache directory ('' disables)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--force", action="store_true")
        p.add_argument("--limit", type=int, default=2000, help="matrix size guard")

    g = sub.add_parser("gram", help="graded Cartan / Gram matrices")
    g.add_argument("--diagram")
    g.add_argument("--ell", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--blocks", type=int, metavar="N", help="direct sum over blocks of rank N")
    common(g)
    g.set_defaults(fn=cmd_gram)

    d = sub.add_parser("det", help="graded Cartan determinants")
    d.add_argument("--diagram")
    d.add_argument("--ell", type=int)
    d.add_argument("--d", type=int)
    d.add_argument("--check", action="store_true", help="cross-check against the Gram matrix")
    common(d)
    d.set_defaults(fn=cmd_det)

    v = sub.add_parser("verify", help="verify a supported identity")
    v.add_argument("identity")
    for flag in ("p", "r", "d", "dmax", "u", "ell", "n", "nmax", "pmax", "tmax"):
        v.add_argument(f"--{flag}", type=int)
    v.add_argument("--diagram")
    common(v)
    v.set_defaults(fn=cmd_verify)

    i = sub.add_parser("irred", help="irreducibility of the specialized basic module")
    i.add_argument("--diagram")
    i.add_argument("--ell", type=int)
    i.add_argument("--mode", choices=["closed_form", "exact", "both"], default="both")
    common(i)
    i.set_defaults(fn=cmd_irred)

    t = sub.add_parser("twisted", help="conjectured twisted determinants")
    t.add_argument("--diagram")
    t.add_argument("--d", type=int)
    common(t)
    t.set_defaults(fn=cmd_twisted)

    s = sub.add_parser("snf", help="invariant factors of a matrix from JSON")
    s.add_argument("--input")
    s.add_argument("--ring", choices=["zint", "qlaurent", "zlaurent"])
    s.add_argument("--budget", type=int, default=50000)
    common(s)
    s.set_defaults(fn=cmd_snf)

    q = sub.add_parser("invariants", help="closed-form invariants of a partition")
    q.add_argument("--p", type=int)
    q.add_argument("--r", type=int)
    q.add_argument("--ell", type=int)
    q.add_argument("--partition", help="comma-separated parts, e.g. 3,1,1")
    common(q)
    q.set_defaults(fn=cmd_invariants)

    r = sub.add_parser("report", help="layered conjecture verification report")
    r.add_argument("--p", type=int)
    r.add_argument("--r", type=int)
    r.add_argument("--d", type=int)
    r.add_argument("--budget", type=int, default=50000)
    common(r)
    r.set_defaults(fn=cmd_report)

    tb = sub.add_parser("table", help="determinant table for a range of weights")
    tb.add_argument("--diagram")
    tb.add_argument("--ell", type=int)
    tb.add_argument("--dmax", type=int, default=4)
    common(tb)
    tb.set_defaults(fn=cmd_table)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cache = _cache_from(args)
    cache_key = None
    if args.command in ("gram", "det", "table", "twisted"):
        fields = {k: v for k, v in sorted(vars(args).items()) if k not in ("fn", "workers")}
        cache_key = cache.key("output", args.command, json.dumps(fields, default=str, sort_keys=True))
        hit = cache.get(cache_key)
        if hit is not None:
            sys.stdout.write(hit)
            return 0
    try:
        text = args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except VerificationFailure as exc:
        sys.stdout.write(str(exc))
        return 1
    sys.stdout.write(text)
    if cache_key is not None:
        cache.put(cache_key, text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
