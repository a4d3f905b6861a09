"""Command-line driver.

Every task prints one JSON object per line (or TSV rows for ``--format tsv``).
Exit status is 0 when every report is "verified" or "outside-regime", 1 when
any report failed or is degenerate, and 2 on malformed input or an unusable
cache directory.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from .algebra import make_algebra
from .cayley_hamilton import (
    DegreeCapExceeded,
    MinPoly,
    Report,
    _distinct_at,
    minimal_polynomial,
    poly_from_roots,
    predicted_spectrum,
    spectrum_check,
    substitute_parameters,
    verify_generic_ch,
    verify_numeric_ch,
)
from .ncmatrix import NCMatrix
from .scalars import ALPHA, H, DivisionByZero, Scalar
from .spin import extension_matrix

log = logging.getLogger("ncsphere")

CACHE_VERSION = 1
CACHE_ENV = "NCSPHERE_CACHE"
OK_STATUSES = {"verified", "outside-regime"}


class UsageError(ValueError):
    pass


class CacheIOError(OSError):
    def __init__(self, path, exc):
        super().__init__(f"cache I/O failed at {path}: {exc}")
        self.path = path


# cache -------------------------------------------------------------------------


class Cache:
    """Content-addressed JSON store; entries carry their key and version and are rewritten if corrupt."""

    def __init__(self, root, version=CACHE_VERSION):
        self.root = Path(root)
        self.version = version
        self.hits = 0
        self.misses = 0

    @staticmethod
    def digest(key):
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()

    def path(self, key):
        return self.root / f"v{self.version}" / f"{self.digest(key)}.json"

    def get(self, key):
        path = self.path(key)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            log.warning("ignoring unreadable cache entry %s", path)
            return None
        if not isinstance(data, dict) or data.get("version") != self.version or data.get("key") != key:
            log.warning("ignoring mismatched cache entry %s", path)
            return None
        return data.get("payload")

    def put(self, key, payload):
        path = self.path(key)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump({"version": self.version, "key": key, "payload": payload}, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError as exc:
            raise CacheIOError(path, exc) from exc

    def get_or_compute(self, key, compute, load=lambda x: x, dump=lambda x: x):
        payload = self.get(key)
        if payload is not None:
            try:
                value = load(payload)
            except (KeyError, TypeError, ValueError) as exc:
                log.warning("recomputing corrupt cache payload for %s: %s", key, exc)
            else:
                self.hits += 1
                log.info("cache hit %s", key)
                return value
        self.misses += 1
        value = compute()
        self.put(key, dump(value))
        return value


class NullCache(Cache):
    def __init__(self):
        super().__init__(".", CACHE_VERSION)

    def get(self, key):
        return None

    def put(self, key, payload):
        pass


# argument helpers ------------------------------------------------------------------


def parse_rational(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational P/Q, got {text!r}") from exc
    return value


def _mode(args):
    return {
        "hbar": None if args.hbar is None else str(args.hbar),
        "alpha": None if args.alpha is None else str(args.alpha),
    }


def _scalar_or(value, default):
    return default if value is None else Scalar.from_fraction(value)


def _point(args):
    """The rational point (h, alpha) when both are given, else None."""
    if args.hbar is None or args.alpha is None:
        return None
    return args.hbar, args.alpha


def _failure_witness(details):
    """Paths of failing boolean checks, so failed reports always carry a witness."""
    out = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif obj is False:
            out.append(prefix)

    walk("", details.get("checks", {}))
    return out


def _report_json(report, inputs):
    data = report.to_json()
    data["inputs"] = inputs
    if data["status"] == "failed" and "witness" not in data:
        data["witness"] = _failure_witness(report.details) or data.get("error") or "see details"
    return data


# tasks --------------------------------------------------------------------------------


def task_verify_ch(args, cache):
    inputs = {"k": args.k, **_mode(args)}
    if args.k == "generic":
        if args.alpha is not None:
            raise UsageError("the generic identity lives in U(gl(2)_h); --alpha does not apply")
        return [_report_json(verify_generic_ch(hbar=args.hbar), inputs)]
    k = int(args.k)
    presentations = ("sl2h", "su2h") if args.presentation == "both" else (args.presentation,)
    alpha = _scalar_or(args.alpha, ALPHA)
    out = []
    for pres in presentations:
        rep = verify_numeric_ch(k, pres, alpha=alpha, hbar=args.hbar)
        out.append(_report_json(rep, {**inputs, "presentation": pres}))
    return out


def _load_matrix(ctx):
    return lambda payload: NCMatrix.from_json(payload, ctx)


def cached_extension(cache, args, k):
    alpha = _scalar_or(args.alpha, ALPHA)
    ctx = make_algebra("sl2h", alpha=alpha, hbar=args.hbar)
    key = {"kind": "extension", "presentation": "sl2h", "k": k, **_mode(args)}
    return cache.get_or_compute(key, lambda: extension_matrix(ctx, k).matrix, _load_matrix(ctx),
                                lambda m: m.to_json())


def task_minpoly(args, cache):
    k = args.k
    inputs = {"k": k, **_mode(args)}
    if k < 1:
        raise UsageError("--k must be at least 1")
    started = time.perf_counter()
    M = cached_extension(cache, args, k)
    key = {"kind": "minpoly", "presentation": "sl2h", "k": k, **_mode(args)}
    try:
        mp = cache.get_or_compute(
            key,
            lambda: minimal_polynomial(M, cap=args.cap),
            lambda p: MinPoly([Scalar.from_json(c) for c in p]),
            lambda m: [c.to_json() for c in m.coefficients],
        )
    except DegreeCapExceeded as exc:
        return [_report_json(Report("spectrum", "failed", k, details={"error": str(exc)}), inputs)]
    if args.hbar is None and args.alpha is None:
        rep = spectrum_check(k, at=None, minpoly=mp)
        rep.elapsed_ms = (time.perf_counter() - started) * 1e3
        return [_report_json(rep, inputs)]
    # at a specialization compare with the predicted polynomial, whose coefficients are s-free
    hbar = _scalar_or(args.hbar, H)
    alpha = _scalar_or(args.alpha, ALPHA)
    expected = [substitute_parameters(c, hbar, alpha) for c in poly_from_roots(predicted_spectrum(k).values())]
    match = len(expected) == len(mp.coefficients) and all(a == b for a, b in zip(expected, mp.coefficients))
    details = {"degree": mp.degree}
    point = _point(args)
    status = "verified" if match else "failed"
    if point is not None:
        h, a = point
        roots = predicted_spectrum(k).values()
        diffs = [roots[i] - roots[j] for i in range(len(roots)) for j in range(i + 1, len(roots))]
        distinct = h * h != 4 * a and _distinct_at(diffs, h, a)
        details["distinct_at_point"] = distinct
        if match and not distinct:
            status = "degenerate"
    if not match:
        details["witness"] = {
            "discovered": [str(c) for c in mp.coefficients],
            "predicted": [str(c) for c in expected],
        }
    rep = Report("spectrum", status, k, minpoly=mp.coefficients, details=details,
                 elapsed_ms=(time.perf_counter() - started) * 1e3)
    return [_report_json(rep, inputs)]


def _degenerate_at_point(args, k):
    point = _point(args)
    if point is None:
        return None
    h, a = point
    if h * h == 4 * a:
        return "h^2 - 4 alpha vanishes"
    roots = predicted_spectrum(k).values()
    diffs = [roots[i] - roots[j] for i in range(len(roots)) for j in range(i + 1, len(roots))]
    if not _distinct_at(diffs, h, a):
        return "two eigenvalues of L_(k) coincide, so a Lagrange denominator vanishes"
    return None


def task_idempotents(args, cache):
    from .line_bundles import idempotent_suite_check

    inputs = {"k": args.k, "presentation": args.presentation, "method": args.method, **_mode(args)}
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    if args.presentation == "su2h" and args.k != 2:
        raise UsageError("the compact presentation is provided for k = 2 (L-bar_(2))")
    rep = idempotent_suite_check(args.k, args.presentation, direct=args.method == "direct")
    reason = _degenerate_at_point(args, args.k)
    if args.alpha == 0 and args.presentation == "su2h":
        reason = "alpha = 0"
    if reason is not None and rep.ok:
        rep.status = "degenerate"
        rep.details["reason"] = reason
    return [_report_json(rep, inputs)]


def task_iso_check(args, cache):
    from .line_bundles import e11_witness_report

    inputs = {"witness": args.witness, **_mode(args)}
    rep = e11_witness_report()
    if args.alpha == 0 and rep.ok:
        rep.status = "degenerate"
        rep.details["reason"] = "alpha = 0: the witness divides by alpha"
    return [_report_json(rep, inputs)]


def _pairing_json(res):
    data = res.to_json()
    if res.status == "mismatch":
        status = "failed"
        data["witness"] = {"pairing": data["pairing"], "oracle": data["oracle"], "closed_form": data["closed_form"]}
    elif res.regime in ("outside-regime", "degenerate"):
        # degenerate specializations only occur for n <= k1 + k2, outside the closed-form regime
        status = "outside-regime"
    else:
        status = "verified"
    data["status"] = status
    data["task"] = "pairing"
    return data


def _check_pairing_alpha(args, n):
    if args.alpha is None:
        return
    h = Fraction(1) if args.hbar is None else args.hbar
    forced = -h * h * (n * n - 1) / 4
    if args.alpha != forced:
        raise UsageError(f"the {n}-dimensional irrep forces alpha = {forced}, not {args.alpha}")


def task_pairing(args, cache):
    from .representations import index_pairing

    if args.k1 < 0 or args.k2 < 0 or args.n < 1:
        raise UsageError("need k1, k2 >= 0 and n >= 1")
    _check_pairing_alpha(args, args.n)
    hbar = 1 if args.hbar is None else args.hbar
    if hbar == 0:
        raise UsageError("the irreps need h != 0")
    res = index_pairing((args.k1, args.k2), args.n, hbar=hbar)
    data = _pairing_json(res)
    data["inputs"] = {"k1": args.k1, "k2": args.k2, "n": args.n, "hbar": str(Fraction(hbar))}
    return [data]


def task_pairing_table(args, cache):
    from .representations import index_pairing

    if args.max_k < 0 or args.max_n < 1 or args.min_n < 1:
        raise UsageError("need max-k >= 0 and n >= 1")
    if args.alpha is not None:
        raise UsageError("alpha is fixed by each irrep; omit --alpha for the table")
    hbar = 1 if args.hbar is None else args.hbar
    if hbar == 0:
        raise UsageError("the irreps need h != 0")
    out = []
    for k in range(args.max_k + 1):
        for j in range(k + 1):
            for n in range(args.min_n, args.max_n + 1):
                key = {"kind": "pairing", "k1": k - j, "k2": j, "n": n, "hbar": str(Fraction(hbar))}
                data = cache.get_or_compute(key, lambda: _pairing_json(index_pairing((k - j, j), n, hbar=hbar)))
                data = dict(data)
                data["inputs"] = {"k1": k - j, "k2": j, "n": n, "hbar": str(Fraction(hbar))}
                out.append(data)
    return out


def task_derham(args, cache):
    from .derham import derham_report

    N = args.max_degree
    if N < 0:
        raise UsageError("--max-degree must be nonnegative")
    inputs = {"N": N, **_mode(args)}
    alpha = None if args.alpha is None else Scalar.from_fraction(args.alpha)
    try:
        rep = derham_report(N, hbar=args.hbar, alpha=alpha, include_matrices=args.matrices)
    except DivisionByZero as exc:
        rep = Report("derham", "degenerate", None, details={"N": N, "reason": str(exc)})
    return [_report_json(rep, inputs)]


# parser / driver ---------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hbar", type=parse_rational, default=None, help="rational P/Q (default symbolic)")
    common.add_argument("--alpha", type=parse_rational, default=None, help="rational P/Q (default symbolic)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--cache-dir", default=None, help=f"cache directory (overridden by ${CACHE_ENV})")
    common.add_argument("--stable-output", action="store_true", help="drop timings for byte comparison")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ncsphere", description="Exact checks on the noncommutative sphere.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-ch", parents=[common], help="Cayley-Hamilton identities")
    s.add_argument("--k", choices=("1", "2", "generic"), required=True)
    s.add_argument("--presentation", choices=("sl2h", "su2h", "both"), default="both")
    s.set_defaults(func=task_verify_ch)

    s = sub.add_parser("minpoly", parents=[common], help="minimal polynomial of L_(k) against the predicted roots")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--cap", type=int, default=None, help="largest degree searched (default k + 2)")
    s.set_defaults(func=task_minpoly)

    s = sub.add_parser("idempotents", parents=[common], help="Lagrange idempotent suite")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--presentation", choices=("sl2h", "su2h"), default="sl2h")
    s.add_argument("--method", choices=("direct", "horner"), default="direct")
    s.set_defaults(func=task_idempotents)

    s = sub.add_parser("iso-check", parents=[common], help="module isomorphism witnesses")
    s.add_argument("--witness", choices=("e11",), default="e11")
    s.set_defaults(func=task_iso_check)

    s = sub.add_parser("pairing", parents=[common], help="index pairing with one irrep")
    s.add_argument("--k1", type=int, required=True)
    s.add_argument("--k2", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=task_pairing)

    s = sub.add_parser("pairing-table", parents=[common], help="index pairings for all small labels")
    s.add_argument("--max-k", type=int, default=4)
    s.add_argument("--max-n", type=int, default=7)
    s.add_argument("--min-n", type=int, default=1)
    s.set_defaults(func=task_pairing_table)

    s = sub.add_parser("derham", parents=[common], help="truncated de Rham complex")
    s.add_argument("--max-degree", type=int, default=2)
    s.add_argument("--matrices", action="store_true", help="include d0 and d1 in the report")
    s.set_defaults(func=task_derham)
    return p


_TSV_PAIRING = ("k1", "k2", "n", "pairing", "regime")
_TSV_GENERIC = ("task", "k", "status")


def render(reports, fmt, stable, command):
    if stable:
        reports = [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in reports]
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in reports)
    cols = _TSV_PAIRING if command in ("pairing", "pairing-table") else _TSV_GENERIC
    lines = ["\t".join(cols)]
    for r in reports:
        lines.append("\t".join("" if r.get(c) is None else str(r.get(c)) for c in cols))
    return "\n".join(lines) + "\n"


def _join_negative_values(argv):
    """Let ``--alpha -3/4`` through argparse, which would read -3/4 as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--hbar", "--alpha"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run_command(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    cache_dir = os.environ.get(CACHE_ENV) or args.cache_dir
    cache = Cache(cache_dir) if cache_dir else NullCache()
    try:
        reports = args.func(args, cache)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CacheIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(reports, args.format, args.stable_output, args.command)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        stdout.write(text)
    return 0 if all(r.get("status") in OK_STATUSES for r in reports) else 1


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
