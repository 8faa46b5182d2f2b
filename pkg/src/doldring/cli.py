"""Batch front end: parameter records in, JSON or text reports out.

Exit status is 0 when every requested check passes, 1 when some check fails
or a batch row errors, and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import cw
from .grassmann import (
    FlagType,
    flag_presentation,
    flag_sw_form,
    functoriality_holds,
    grassmann_long_generators,
    grassmann_presentation,
    grassmann_sw_form,
    high_coefficients_reduce,
    poincare_flag,
    poincare_grassmann,
    poincare_projective,
    poincare_sphere,
    sphere_bundle_presentation,
    tensor_dims,
)
from .groebner import PresentedAlgebra, groebner_basis, hilbert_function, regular_sequence_certificate
from .torus import (
    CharacteristicPair,
    PairError,
    build_torus_presentation,
    fiber_poincare,
    h_vector,
    linear_relations,
    stanley_reisner_relations,
    validate_pair,
)

KINDS = ("torus", "grassmann", "flag", "sphere", "cw", "equivariant")
CHECKS = ("hilbert", "regular-sequence", "cw-crosscheck", "ideal-equality")
DEFAULT_FIXTURES = Path(__file__).resolve().parent / "fixtures"
DEFAULT_INFINITE_DEGREE = 20

PASS, FAIL, SKIPPED, ERROR = "PASS", "FAIL", "SKIPPED", "ERROR"


class RequestError(ValueError):
    """Malformed request; ``location`` points into the input document."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass(frozen=True)
class ComputationRequest:
    kind: str
    params: Dict[str, Any]
    m: Optional[int]
    max_degree: Optional[int]
    checks: Tuple[str, ...]
    echo: Dict[str, Any] = field(compare=False)


def _height(value, where: str) -> Optional[int]:
    if value in ("inf", "infinity"):
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise RequestError(where, f"expected a non-negative integer or \"inf\", got {value!r}")
    return value


def _posint(doc: dict, key: str, where: str, minimum: int = 1) -> int:
    if key not in doc:
        raise RequestError(where, f"missing field {key!r}")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise RequestError(f"{where}.{key}", f"expected an integer >= {minimum}, got {v!r}")
    return v


def parse_request(doc: Any, where: str = "request",
                  default_checks: Sequence[str] = ("hilbert",),
                  default_degree: Optional[int] = None) -> ComputationRequest:
    if not isinstance(doc, dict):
        raise RequestError(where, f"expected an object, got {type(doc).__name__}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise RequestError(f"{where}.kind", f"expected one of {list(KINDS)}, got {kind!r}")
    checks = doc.get("checks", list(default_checks))
    if not isinstance(checks, list) or any(c not in CHECKS for c in checks):
        raise RequestError(f"{where}.checks", f"expected a list drawn from {list(CHECKS)}, got {checks!r}")
    checks = tuple(dict.fromkeys(checks))
    max_degree = doc.get("max_degree", default_degree)
    if max_degree is not None and (isinstance(max_degree, bool) or not isinstance(max_degree, int) or max_degree < 0):
        raise RequestError(f"{where}.max_degree", f"expected a non-negative integer, got {max_degree!r}")

    params: Dict[str, Any] = {}
    m: Optional[int] = None
    if kind == "equivariant":
        src = doc.get("source")
        if not isinstance(src, dict):
            raise RequestError(f"{where}.source", "expected a builder record")
        if src.get("kind") in ("equivariant", "cw"):
            raise RequestError(f"{where}.source.kind", "must be torus, grassmann, flag or sphere")
        inner = parse_request(dict(src, m=src.get("m", "inf")), f"{where}.source", default_checks, default_degree)
        params = {"source": inner}
    elif kind == "cw":
        if "x_file" not in doc:
            raise RequestError(where, "missing field 'x_file'")
        params["x_file"] = str(doc["x_file"])
        if "s_file" in doc:
            params["s_file"] = str(doc["s_file"])
        else:
            m = _height(doc.get("m"), f"{where}.m")
            if m is None:
                raise RequestError(f"{where}.m", "a CW computation needs a finite sphere dimension")
    else:
        if "m" not in doc:
            raise RequestError(where, "missing field 'm'")
        m = _height(doc["m"], f"{where}.m")
        if kind == "grassmann":
            n = _posint(doc, "n", where, 2)
            k = _posint(doc, "k", where, 1)
            if k > n - 1:
                raise RequestError(f"{where}.k", f"need 1 <= k <= n-1, got k={k}, n={n}")
            params = {"n": n, "k": k}
        elif kind == "flag":
            nu = doc.get("nu")
            if not isinstance(nu, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in nu):
                raise RequestError(f"{where}.nu", f"expected a list of integers, got {nu!r}")
            try:
                FlagType(tuple(nu))
            except ValueError as exc:
                raise RequestError(f"{where}.nu", str(exc)) from None
            params = {"nu": list(nu)}
        elif kind == "sphere":
            params = {"n": _posint(doc, "n", where, 1)}
        elif kind == "torus":
            if "pair" in doc:
                params = {"pair": doc["pair"]}
            elif "pair_file" in doc:
                params = {"pair_file": str(doc["pair_file"])}
            else:
                raise RequestError(where, "missing field 'pair_file' (or inline 'pair')")
    echo = dict(doc)
    echo["checks"] = list(checks)
    return ComputationRequest(kind, params, m, max_degree, checks, echo)


def _resolve(name: str, fixtures_dir: Path, sub: str) -> Path:
    p = Path(name)
    for cand in (p, fixtures_dir / sub / p, fixtures_dir / p):
        if cand.is_file():
            return cand
    raise FileNotFoundError(f"fixture {name!r} not found (looked in ., {fixtures_dir / sub}, {fixtures_dir})")


@dataclass
class _Built:
    algebra: PresentedAlgebra
    fiber: List[int]
    fiber_cw: Optional[cw.EquivariantCW]
    regular: Optional[Tuple[List, List]] = None  # (gens, modulo)
    sw_form: Optional[PresentedAlgebra] = None
    extras: Dict[str, Any] = field(default_factory=dict)
    failure: Optional[Dict[str, Any]] = None


def _build(req: ComputationRequest, fixtures_dir: Path) -> _Built:
    kind, p, m = req.kind, req.params, req.m
    if kind == "grassmann":
        n, k = p["n"], p["k"]
        alg, _ = grassmann_presentation(n, k, m)
        counts = cw.grassmann_schubert_counts(n, k)
        return _Built(alg, poincare_grassmann(n, k), cw.EquivariantCW.fixed(cw.even_cell_complex(counts)),
                      regular=(alg.generators(), []), sw_form=grassmann_sw_form(n, k, m)[0])
    if kind == "flag":
        flag = FlagType(tuple(p["nu"]))
        alg, _ = flag_presentation(flag, m)
        counts = cw.flag_schubert_counts(flag.nu)
        return _Built(alg, poincare_flag(flag.nu), cw.EquivariantCW.fixed(cw.even_cell_complex(counts)),
                      regular=(alg.generators(), []), sw_form=flag_sw_form(flag, m)[0])
    if kind == "sphere":
        alg = sphere_bundle_presentation(p["n"], m)
        return _Built(alg, poincare_sphere(p["n"]), cw.two_cell_sphere(p["n"]), regular=(alg.generators(), []))
    if kind == "torus":
        if "pair" in p:
            pair = CharacteristicPair.from_json(p["pair"], source="inline")
        else:
            pair = CharacteristicPair.load(_resolve(p["pair_file"], fixtures_dir, "torus"))
        report = validate_pair(pair)
        if not report.ok:
            return _Built(None, [], None, failure={
                "verdict": FAIL,
                "reason": "characteristic vectors at a vertex are not a Z-basis",
                "witness": [v.to_json() for v in report.violations],
            })
        alg = build_torus_presentation(pair, m)
        gens = linear_relations(pair, alg.table)
        if alg.truncation is not None:
            gens.append(alg.truncation)
        fiber_cw = cw.EquivariantCW.fixed(cw.even_cell_complex(h_vector(pair)))
        return _Built(alg, fiber_poincare(pair), fiber_cw,
                      regular=(gens, stanley_reisner_relations(pair, alg.table)),
                      extras={"validation": {"ok": True, "violations": []},
                              "vertices": len(pair.vertices)})
    if kind == "equivariant":
        return _build(p["source"], fixtures_dir)
    raise AssertionError(kind)


def _default_degree(built: _Built, m: Optional[int]) -> int:
    top = len(built.fiber) - 1
    return DEFAULT_INFINITE_DEGREE if m is None else top + m + 2


def _first_mismatch(a: Sequence[int], b: Sequence[int]) -> Optional[int]:
    for d in range(max(len(a), len(b))):
        if (a[d] if d < len(a) else 0) != (b[d] if d < len(b) else 0):
            return d
    return None


def _check_hilbert(hilb, oracle) -> dict:
    d = _first_mismatch(hilb, oracle)
    if d is None:
        return {"verdict": PASS}
    return {"verdict": FAIL, "reason": "Hilbert function differs from base (x) fiber",
            "witness": {"degree": d, "observed": hilb[d], "expected": oracle[d]}}


def _check_regular(built: _Built, D: int) -> dict:
    gens, modulo = built.regular
    cert = regular_sequence_certificate(built.algebra.table, gens, D, modulo)
    if cert.passed:
        return {"verdict": PASS}
    d = cert.witness_degree
    return {"verdict": FAIL, "reason": "Hilbert series does not factor as a complete intersection",
            "witness": {"degree": d, "observed": cert.observed[d], "expected": cert.expected[d]}}


def _check_cw(built: _Built, m: Optional[int], hilb: List[int]) -> dict:
    if m is None:
        return {"verdict": SKIPPED, "reason": "RP^infinity has no finite cell structure"}
    quotient = cw.dold_complex(m, built.fiber_cw)
    perf = cw.perfectness_check(quotient)
    if not perf.perfect:
        return {"verdict": FAIL, "reason": "quotient cell structure is not perfect mod 2",
                "witness": {"dimension": perf.dimension, "cell": perf.cell}}
    betti = cw.betti_numbers(quotient)
    d = _first_mismatch(betti, hilb)
    if d is None:
        return {"verdict": PASS, "betti": betti}
    return {"verdict": FAIL, "reason": "cellular Betti numbers differ from the presented ring",
            "witness": {"degree": d, "betti": betti[d] if d < len(betti) else 0,
                        "hilbert": hilb[d] if d < len(hilb) else 0}}


def _check_ideals(req: ComputationRequest) -> dict:
    kind, p, m = req.kind, req.params, req.m
    if kind == "equivariant":
        return _check_ideals(p["source"])
    if kind == "grassmann":
        n, k = p["n"], p["k"]
        bad = high_coefficients_reduce(n, k, 2 * k + 2)
        if bad:
            return {"verdict": FAIL, "reason": "a_(2n+i) not in (y, a_j : 2n-2k < j <= 2n)",
                    "witness": {"degree": 2 * n + bad[0]}}
        if m is None:
            return {"verdict": PASS, "note": "long generating set needs finite m; high coefficients checked"}
        alg, _ = grassmann_presentation(n, k, m)
        longer = grassmann_long_generators(n, k, m)
        gb_short = groebner_basis(alg.table, alg.generators())
        gb_long = groebner_basis(alg.table, longer)
        for g in longer:
            if not gb_short.contains(g):
                return {"verdict": FAIL, "reason": "long generator outside the short ideal",
                        "witness": {"degree": g.degree(), "element": g.render()}}
        for g in alg.generators():
            if not gb_long.contains(g):
                return {"verdict": FAIL, "reason": "short generator outside the long ideal",
                        "witness": {"degree": g.degree(), "element": g.render()}}
        return {"verdict": PASS}
    if kind == "flag":
        flag = FlagType(tuple(p["nu"]))
        if functoriality_holds(flag, m):
            return {"verdict": PASS, "note": "Grassmann relations pull back into the flag ideal"}
        return {"verdict": FAIL, "reason": "pulled-back Grassmann relation outside the flag ideal",
                "witness": {"degree": None}}
    return {"verdict": SKIPPED, "reason": f"no alternative generating set for kind {kind!r}"}


def _run_cw(req: ComputationRequest, fixtures_dir: Path, D: Optional[int]) -> dict:
    p = req.params
    x = cw.EquivariantCW.load(_resolve(p["x_file"], fixtures_dir, "cw"))
    if "s_file" in p:
        s = cw.EquivariantCW.load(_resolve(p["s_file"], fixtures_dir, "cw"))
    else:
        s = cw.antipodal_sphere(req.m)
    quotient = cw.involution_quotient(cw.product_complex(s, x))
    base = cw.betti_numbers(cw.involution_quotient(cw.product_complex(s, cw.complex_projective_space(0))))
    fiber = cw.betti_numbers(x.complex)
    betti = cw.betti_numbers(quotient)
    perf = cw.perfectness_check(quotient)
    expected = tensor_dims(base, fiber, len(betti) - 1)
    out: Dict[str, Any] = {"cells": [len(c) for c in quotient.cells], "betti": betti,
                           "oracle": expected, "perfect": perf.perfect}
    checks = {}
    for name in req.checks:
        if name in ("hilbert", "cw-crosscheck"):
            if name == "cw-crosscheck" and not perf.perfect:
                checks[name] = {"verdict": FAIL, "reason": "quotient cell structure is not perfect mod 2",
                                "witness": {"dimension": perf.dimension, "cell": perf.cell}}
                continue
            d = _first_mismatch(betti, expected)
            checks[name] = {"verdict": PASS} if d is None else {
                "verdict": FAIL, "reason": "Betti numbers differ from Betti(Y) (x) Betti(X)",
                "witness": {"degree": d}}
        else:
            checks[name] = {"verdict": SKIPPED, "reason": f"{name} does not apply to a bare CW complex"}
    out["checks"] = checks
    return out


def run(req: ComputationRequest, fixtures_dir: Path = DEFAULT_FIXTURES) -> Dict[str, Any]:
    """Execute one request and return its report (a JSON-ready dict)."""
    report: Dict[str, Any] = {"request": req.echo}
    if req.kind == "cw":
        report.update(_run_cw(req, fixtures_dir, req.max_degree))
    else:
        built = _build(req, fixtures_dir)
        if built.failure is not None:
            report["validation"] = {"ok": False, "violations": built.failure["witness"]}
            report["checks"] = {"validation": built.failure}
            report["checks"].update({c: {"verdict": SKIPPED, "reason": "pair failed validation"}
                                     for c in req.checks})
        else:
            m = req.params["source"].m if req.kind == "equivariant" else req.m
            D = req.max_degree if req.max_degree is not None else _default_degree(built, m)
            alg = built.algebra
            report.update(built.extras)
            report["presentation"] = alg.to_json()
            if built.sw_form is not None:
                report["presentation_sw"] = built.sw_form.to_json()
            hilb = hilbert_function(alg, D)
            oracle = tensor_dims(poincare_projective(m, D), built.fiber, D)
            report["max_degree"] = D
            report["fiber_poincare"] = built.fiber
            report["hilbert"] = hilb
            report["oracle"] = oracle
            checks = {}
            for name in req.checks:
                if name == "hilbert":
                    checks[name] = _check_hilbert(hilb, oracle)
                elif name == "regular-sequence":
                    checks[name] = _check_regular(built, D)
                elif name == "cw-crosscheck":
                    checks[name] = _check_cw(built, m, hilb)
                elif name == "ideal-equality":
                    checks[name] = _check_ideals(req)
            report["checks"] = checks
    verdicts = [c["verdict"] for c in report["checks"].values()]
    report["status"] = FAIL if FAIL in verdicts else PASS
    return report


def _run_entry(args) -> Dict[str, Any]:
    doc, where, checks, degree, fixtures_dir, timing = args
    start = time.perf_counter()
    try:
        req = parse_request(doc, where, checks, degree)
        report = run(req, Path(fixtures_dir))
    except (RequestError, PairError, cw.ChainComplexError, FileNotFoundError, ValueError) as exc:
        report = {"request": doc, "status": ERROR, "error": str(exc), "checks": {}}
    if timing:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 4)
    return report


def batch(docs: Sequence[Any], checks: Sequence[str] = ("hilbert",), max_degree: Optional[int] = None,
          fixtures_dir: Path = DEFAULT_FIXTURES, jobs: int = 1, timing: bool = False,
          where: str = "input") -> Dict[str, Any]:
    """Run every request independently; one summary row per request, in input order."""
    tasks = [(doc, f"{where}[{i}]", tuple(checks), max_degree, str(fixtures_dir), timing)
             for i, doc in enumerate(docs)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_entry, tasks))
    else:
        reports = [_run_entry(t) for t in tasks]
    summary = []
    for i, (doc, rep) in enumerate(zip(docs, reports)):
        row = {"index": i, "kind": doc.get("kind") if isinstance(doc, dict) else None,
               "label": _label(doc), "status": rep["status"],
               "checks": {k: v["verdict"] for k, v in rep.get("checks", {}).items()}}
        if rep["status"] == ERROR:
            row["error"] = rep["error"]
        summary.append(row)
    return {"summary": summary, "reports": reports,
            "status": PASS if all(r["status"] == PASS for r in reports) else FAIL}


def _label(doc: Any) -> str:
    if not isinstance(doc, dict):
        return repr(doc)
    keys = [k for k in ("n", "k", "nu", "pair_file", "x_file", "s_file", "m") if k in doc]
    parts = [f"{k}={json.dumps(doc[k])}" for k in keys]
    if "source" in doc and isinstance(doc["source"], dict):
        parts.insert(0, f"source={_label(doc['source'])}")
        parts.insert(0, str(doc["source"].get("kind")))
    return " ".join(parts)


# human-readable output

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def pretty_name(name: str) -> str:
    """x1 -> x̃₁, c2 -> c̃₂, c1_2 -> c̃_{1,2}, w4 -> ŵ₄, w2_1 -> ŵ_{2,1}."""
    mt = re.fullmatch(r"([xcw])(\d+)(?:_(\d+))?", name)
    if not mt:
        return name
    letter, i, j = mt.groups()
    head = {"x": "x\u0303", "c": "c\u0303", "w": "\u0175"}[letter]
    if j is None:
        return head + i.translate(_SUB)
    return f"{head}_{{{i},{j}}}"


def pretty_poly(text: str) -> str:
    def factor(f: str) -> str:
        name, _, power = f.partition("^")
        return pretty_name(name) + (power.translate(_SUP) if power else "")
    if text in ("0", "1"):
        return text
    return " + ".join("".join(factor(f) for f in term.split("*")) for term in text.split(" + "))


def format_text(report: Dict[str, Any]) -> str:
    lines = []
    req = report["request"]
    lines.append(f"== {req.get('kind') if isinstance(req, dict) else req} {_label(req)}  [{report['status']}]")
    if "error" in report:
        lines.append(f"   error: {report['error']}")
        return "\n".join(lines)
    for key in ("presentation", "presentation_sw"):
        pres = report.get(key)
        if not pres:
            continue
        gens = ", ".join(f"{pretty_name(v['name'])} (deg {v['degree']})" for v in pres["variables"])
        rels = [pretty_poly(r) for r in pres["relations"]]
        if pres["truncation"]:
            rels.append(f"y{str(pres['truncation']['power']).translate(_SUP)}")
        label = "generators" if key == "presentation" else "in w-classes"
        lines.append(f"   {label}: {gens}")
        lines.append(f"   relations: {', '.join(rels) or '(none)'}")
    if "validation" in report and not report["validation"]["ok"]:
        for v in report["validation"]["violations"]:
            lines.append(f"   vertex {v['facets']}: det {v['det']}")
    for key in ("hilbert", "oracle", "betti"):
        if key in report:
            lines.append(f"   {key}: {report[key]}")
    for name, c in report.get("checks", {}).items():
        extra = ""
        if "witness" in c:
            extra = f"  witness {json.dumps(c['witness'], sort_keys=True)}"
        elif "reason" in c:
            extra = f"  ({c['reason']})"
        lines.append(f"   {name}: {c['verdict']}{extra}")
    if "elapsed_seconds" in report:
        lines.append(f"   time: {report['elapsed_seconds']}s")
    return "\n".join(lines)


def _load_input(arg: str) -> Tuple[Any, str]:
    stripped = arg.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        text, where = arg, "inline"
    else:
        path = Path(arg)
        if not path.is_file():
            raise RequestError(arg, "no such input file")
        text, where = path.read_text(), path.name
    try:
        return json.loads(text), where
    except json.JSONDecodeError as exc:
        raise RequestError(f"{where}:{exc.lineno}:{exc.colno}", exc.msg) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="doldring",
        description="Mod-2 cohomology rings of generalized Dold spaces P(S^m, X): build presentations, "
                    "Hilbert functions, regular-sequence certificates and cellular cross-checks.")
    ap.add_argument("--input", "-i", required=True,
                    help="request file or inline JSON; an object is one request, a list is a batch")
    ap.add_argument("--max-degree", type=int, default=None,
                    help="degree bound D for requests without max_degree "
                         "(default: fibre dimension + m + 2, or 20 when m is inf)")
    ap.add_argument("--format", choices=("json", "text"), default="json", help="report format (default json)")
    ap.add_argument("--checks", default="hilbert",
                    help=f"comma list from {','.join(CHECKS)} for requests without 'checks' (default hilbert)")
    ap.add_argument("--fixtures-dir", default=str(DEFAULT_FIXTURES),
                    help="where pair_file / x_file / s_file names are resolved (default: bundled fixtures)")
    ap.add_argument("--jobs", "-j", type=int, default=1, help="batch entries run concurrently (default 1)")
    ap.add_argument("--timing", action="store_true", help="add wall-clock times (makes output non-reproducible)")
    ap.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        print(f"--checks: unknown check(s) {bad}; expected {list(CHECKS)}", file=sys.stderr)
        return 2
    try:
        doc, where = _load_input(args.input)
    except RequestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fixtures = Path(args.fixtures_dir)

    if isinstance(doc, list):
        result = batch(doc, checks, args.max_degree, fixtures, max(1, args.jobs), args.timing, where)
        status = 0 if result["status"] == PASS else 1
        if args.format == "json":
            text = json.dumps(result, indent=2, ensure_ascii=False)
        else:
            rows = [f"{r['index']:>3}  {r['status']:<6} {r['kind'] or '?':<12} {r['label']}"
                    + (f"  ({r['error']})" if "error" in r else "") for r in result["summary"]]
            body = "\n\n".join(format_text(r) for r in result["reports"])
            text = "\n".join(rows) + "\n\n" + body
    else:
        report = _run_entry((doc, where, tuple(checks), args.max_degree, str(fixtures), args.timing))
        if report["status"] == ERROR:
            print(f"error: {report['error']}", file=sys.stderr)
            return 2
        status = 0 if report["status"] == PASS else 1
        text = json.dumps(report, indent=2, ensure_ascii=False) if args.format == "json" else format_text(report)

    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
