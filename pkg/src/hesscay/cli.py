"""Command line interface: ``hesscay <command> --A p/q --B p/q ...``.

Every command prints a JSON report {command, inputs, outputs, checks}.  Exit
status: 0 when all checks pass, 2 on a hypothesis violation (singular input,
bad reduction, torsion not rational), 3 when a check fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import cubic, ec, genus2, pencil
from .algebra import GF, QQ, TernaryForm, canonicalize, make_extension, scalar_str
from .errors import DegenerateError, HesscayError, HypothesisViolation
from .polarity import hessian_form

EXIT_OK, EXIT_HYPOTHESIS, EXIT_CHECK = 0, 2, 3


@dataclass
class CurveSpec:
    A: Fraction
    B: Fraction
    p: int | None = None
    k: int = 1

    def __post_init__(self):
        if not 4 * self.A**3 + 27 * self.B**2:
            raise HypothesisViolation("4A^3+27B^2 = 0: E0 is singular")

    def inputs(self) -> dict:
        out = {"A": scalar_str(self.A), "B": scalar_str(self.B)}
        if self.p is not None:
            out["p"], out["k"] = self.p, self.k
        return out


@dataclass
class Check:
    name: str
    status: str
    witness: object = None


@dataclass
class Report:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def check(self, name: str, ok: bool, witness=None, warn: bool = False) -> bool:
        status = "pass" if ok else ("warn" if warn else "fail")
        self.checks.append(Check(name, status, witness))
        return ok

    @property
    def exit_code(self) -> int:
        return EXIT_CHECK if any(c.status == "fail" for c in self.checks) else EXIT_OK

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=False, default=_json_default)


def _json_default(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return scalar_str(obj)
    return str(obj)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _seed(*parts) -> int:
    return sum(ord(ch) * (i + 1) for i, ch in enumerate(repr(parts))) % (2**31)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_hessian(spec: CurveSpec) -> Report:
    r = Report("hessian", spec.inputs())
    A, B = spec.A, spec.B
    cubic.check_hessian_smooth(A, B)
    He = canonicalize(hessian_form(cubic.weierstrass_form(A, B)))
    r.outputs["He"] = He.to_string()
    closed = canonicalize(TernaryForm(
        {(2, 0, 1): 3 * A, (1, 0, 2): 9 * B, (1, 2, 0): 3, (0, 0, 3): -A * A}, 3, QQ))
    r.check("hessian matches 3Ax^2z+9Bxz^2+3xy^2-A^2z^3", He == closed, closed.to_string())
    return r


def cmd_cayleyan(spec: CurveSpec) -> Report:
    r = Report("cayleyan", spec.inputs())
    Ca = cubic.cayleyan_weierstrass(spec.A, spec.B)
    r.outputs["Ca"] = Ca.to_string()
    r.outputs["Ca_primed"] = canonicalize(cubic.cayleyan_primed(spec.A, spec.B)).to_string()
    ratio = cubic.unprime_form(spec.A, spec.B, cubic.cayleyan_primed(spec.A, spec.B)).ratio_to(Ca)
    r.check("primed and unprimed presentations agree", ratio is not None,
            scalar_str(ratio) if ratio is not None else None)
    if spec.p is not None:
        F = _field(spec)
        E = cubic.PlaneCubic(cubic.weierstrass_form(F(spec.A), F(spec.B), F))
        interp = cubic.cayleyan_interpolate(E)
        expected = canonicalize(Ca.reduce(F))
        r.outputs["Ca_interpolated"] = interp.to_string()
        r.check(f"interpolation over F_{F.q} matches", interp == expected, expected.to_string())
    return r


def cmd_f0(spec: CurveSpec) -> Report:
    r = Report("f0", spec.inputs())
    A, B = spec.A, spec.B
    F0p = cubic.f0_weierstrass(A, B)
    r.outputs["F0_primed"] = canonicalize(F0p).to_string()
    r.outputs["F0"] = cubic.f0_unprimed(A, B).to_string()
    ratio = hessian_form(F0p).ratio_to(cubic.cayleyan_primed(A, B))
    r.check("He(F0) is proportional to Ca(E0) in primed coordinates", ratio is not None,
            scalar_str(ratio) if ratio is not None else None)
    return r


def cmd_family(spec: CurveSpec, kind: str, t: Fraction) -> Report:
    r = Report("family", {**spec.inputs(), "kind": kind, "t": scalar_str(t)})
    A, B = spec.A, spec.B
    if kind == "symplectic":
        P = pencil.symplectic_family(A, B)
        fam = pencil.family_weierstrass_E(A, B)
        tw = t
    else:
        P = pencil.antisymplectic_family(A, B)
        fam = pencil.family_weierstrass_F(A, B)
        tw = pencil.anti_prime_parameter(A, B, t)
    member = P.member(t)
    r.outputs["member"] = canonicalize(member).to_string() if member else "0"
    r.outputs["weierstrass_parameter"] = _param_str(tw)
    r.outputs["a(t)"] = fam.a.to_string()
    r.outputs["b(t)"] = fam.b.to_string()
    r.outputs["scale"] = scalar_str(fam.c)
    fibers = []
    for root, mult in fam.singular_fibers():
        u = root if kind == "symplectic" else pencil.anti_member_parameter(A, B, root)
        fibers.append({"t": _param_str(u), "multiplicity": mult})
    r.outputs["singular_fibers"] = fibers
    if fam.is_singular_at(tw):
        mult = dict((f["t"], f["multiplicity"]) for f in fibers).get(scalar_str(t))
        r.outputs["member_singular"] = {"multiplicity": mult}
        r.check("member is smooth", False, f"discriminant root of multiplicity {mult}", warn=True)
        return r
    a, b = fam.standard(tw) if tw is not pencil.INFINITY else (None, None)
    if a is not None:
        r.outputs["standard_form"] = {"a": scalar_str(a), "b": scalar_str(b)}
        r.outputs["j"] = scalar_str(ec.j_from_coefficients(a, b))
    n1, d1 = pencil.family_weierstrass_E(A, B).j_polys()
    n2, d2 = pencil.family_weierstrass_F(A, B).j_polys()
    r.check("j_F'(t) * j_E(t) = 1728^2 as polynomials", n1 * n2 == d1 * d2 * 1728**2)
    if kind == "anti" and t == 0 and A and B:
        jE = ec.j_from_coefficients(A, B)
        jF = fam.j(0)
        r.check("j(F0) * j(E0) = 1728^2", jE * jF == 1728**2, scalar_str(jE * jF))
    return r


def _param_str(t) -> str:
    return "inf" if t is pencil.INFINITY else scalar_str(t)


def _field(spec: CurveSpec) -> GF:
    if spec.p is None:
        raise HypothesisViolation("a prime --p is required")
    F = make_extension(spec.p, spec.k)
    if spec.A.denominator % spec.p == 0 or spec.B.denominator % spec.p == 0:
        raise HypothesisViolation(f"bad reduction at p = {spec.p}")
    A, B = F(spec.A), F(spec.B)
    if not A or not (4 * A**3 + 27 * B**2):
        raise HypothesisViolation(f"bad reduction at p = {spec.p}: "
                                  "He(E) is singular if and only if A(4A^3+27B^2)=0")
    return F


def _torsion_instance(spec: CurveSpec | None, fixtures: str | None):
    if spec is None or spec.p is None:
        inst = ec.get_fixture("first", fixtures)
        return inst.field, inst.A, inst.B
    F = _field(spec)
    A, B = F(spec.A), F(spec.B)
    if not ec.has_full_3_torsion(A, B):
        hint = next((k for k in (1, 2, 3, 4, 6) if (spec.p**k - 1) % 3 == 0 and spec.p**k <= 10**5
                     and ec.has_full_3_torsion(make_extension(spec.p, k)(spec.A),
                                               make_extension(spec.p, k)(spec.B))), None)
        msg = f"E[3] is not rational over F_{spec.p}^{spec.k}"
        if hint:
            msg += f"; try --k {hint}"
        raise HypothesisViolation(msg)
    return F, A, B


def cmd_classify(spec: CurveSpec | None, kind: str, t: Fraction | None,
                 fixtures: str | None = None, mangle: bool = False) -> Report:
    F, A, B = _torsion_instance(spec, fixtures)
    inputs = {"p": F.p, "k": F.k, "modulus": list(F.modulus), "A": ec._elem_json(A),
              "B": ec._elem_json(B), "kind": kind, "mangle": mangle}
    r = Report("classify", inputs)
    E = ec.WeierstrassCurve(A, B)
    pts = E.torsion3()
    basis = ec.torsion_basis(E)
    P = pencil.symplectic_family(A, B) if kind == "symplectic" else pencil.antisymplectic_family(A, B)
    rng = random.Random(_seed(F.p, F.k, ec._elem_json(A), ec._elem_json(B), kind))
    if t is None:
        u = F.random(rng)
        while not P.is_smooth_member(u):
            u = F.random(rng)
    else:
        u = F(t)
        if not P.is_smooth_member(u):
            raise HypothesisViolation(f"member t = {u} is singular")
    r.inputs["t"] = ec._scalar_json(u)
    target = P.member_curve(u)
    if kind == "symplectic":
        images = {Q: Q.to_proj(F) for Q in pts}
    else:
        images = {Q: pencil.antisymplectic_torsion_map(A, B, Q.to_proj(F)) for Q in pts}
    if mangle:
        # swap the images of two points that are not negatives of each other
        nz = [Q for Q in pts if not Q.is_infinity]
        a, b = nz[0], next(Q for Q in nz[1:] if Q != E.neg(nz[0]))
        images[a], images[b] = images[b], images[a]
    on_member = all(not target.form(img) for img in images.values())
    r.check("images of E0[3] lie on the member", on_member)
    res = ec.classify_isomorphism(E, target, (basis.P1, basis.P2),
                                  (images[basis.P1], images[basis.P2]), images)
    r.outputs["basis"] = [basis.P1.to_json(), basis.P2.to_json()]
    r.outputs["basis_images"] = [images[basis.P1].to_json(), images[basis.P2].to_json()]
    r.outputs["zeta3"] = ec._scalar_json(F.primitive_cube_root())
    r.outputs["source_exponent"] = res.source_pairing.exponent
    r.outputs["target_exponent"] = None if res.target_pairing is None else res.target_pairing.exponent
    r.outputs["verdict"] = res.verdict.value
    if res.reason:
        r.outputs["reason"] = res.reason
    expected = {"symplectic": ec.Classification.SYMPLECTIC,
                "anti": ec.Classification.ANTI_SYMPLECTIC}[kind]
    if mangle:
        r.check("mangled correspondence is rejected", res.verdict is ec.Classification.NEITHER)
    else:
        r.check(f"verdict is {expected.value}", res.verdict is expected)
    return r


def cmd_genus2(spec: CurveSpec, p: int = 101) -> Report:
    r = Report("genus2", {**spec.inputs(), "p": p})
    A, B = spec.A, spec.B
    C = genus2.frey_kani_curve(A, B)
    r.outputs["curve"] = repr(C)
    r.outputs["genus"] = C.genus
    targets = {"psi1": (genus2.psi1(A, B), genus2.e0_model(A, B)),
               "psi2": (genus2.psi2(A, B), genus2.cayleyan_model(A, B))}
    r.outputs["targets"] = {"psi1": "y^2 = x^3 + A*x + B",
                            "psi2": "-3*y^2 = x^3 - 18*B*x^2 + 3*delta*x"}
    for name, (m, T) in targets.items():
        r.outputs[name] = m.to_strings()
        res = genus2.on_curve_residual(m, C, T)
        r.check(f"{name} maps C into its target", res.is_zero())
        cert = genus2.verify_morphism_degree(m, C, T, p)
        r.outputs[f"{name}_degree"] = cert.to_json()
        r.check(f"{name} has degree 3", cert.certificate == 3 and cert.max_fiber <= 3,
                cert.certificate)
    ram = genus2.ramification_at_infinity(targets["psi2"][0], C, targets["psi2"][1])
    r.outputs["psi2_ramification_at_infinity"] = {"image": ram.image, "index": ram.index}
    r.check("psi2 is ramified at X = infinity with index 3", ram.index == 3, ram.index)
    r.outputs["note"] = ("the displayed psi2 lands on 3y^2 = x^3 + 18Bx^2 + 3 delta x; "
                         "psi2 here is composed with x -> -x")
    return r


def cmd_verify_all(spec: CurveSpec, fixtures: str | None = None) -> Report:
    r = Report("verify-all", spec.inputs())
    subs = [cmd_hessian(spec), cmd_cayleyan(spec), cmd_f0(spec),
            cmd_family(spec, "symplectic", Fraction(0)), cmd_family(spec, "anti", Fraction(0)),
            cmd_classify(None, "symplectic", None, fixtures),
            cmd_classify(None, "anti", None, fixtures),
            cmd_genus2(spec, spec.p or 101)]
    for sub in subs:
        for c in sub.checks:
            r.checks.append(Check(f"{sub.command}: {c.name}", c.status, c.witness))
    r.outputs["commands"] = [s.command for s in subs]
    return r


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hesscay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_curve=True):
        p.add_argument("--A", type=parse_rational, required=need_curve)
        p.add_argument("--B", type=parse_rational, required=need_curve)
        p.add_argument("--p", type=int)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--json", metavar="PATH", help="also write the report to PATH")
        p.add_argument("--fixtures", metavar="PATH", help="fixture file (default: $HESSCAY_FIXTURES)")

    for name in ("hessian", "cayleyan", "f0", "genus2", "verify-all"):
        common(sub.add_parser(name))
    fam = sub.add_parser("family")
    common(fam)
    fam.add_argument("--kind", choices=("symplectic", "anti"), default="symplectic")
    fam.add_argument("--t", type=parse_rational, default=Fraction(0))
    cls = sub.add_parser("classify")
    common(cls, need_curve=False)
    cls.add_argument("--kind", choices=("symplectic", "anti"), default="symplectic")
    cls.add_argument("--t", type=parse_rational)
    cls.add_argument("--mangle", action="store_true", help="break linearity of the correspondence")
    return parser


def _spec(args) -> CurveSpec | None:
    if args.A is None or args.B is None:
        return None
    return CurveSpec(args.A, args.B, args.p, args.k)


def run(args) -> Report:
    spec = _spec(args)
    dispatch: dict[str, Callable[[], Report]] = {
        "hessian": lambda: cmd_hessian(spec),
        "cayleyan": lambda: cmd_cayleyan(spec),
        "f0": lambda: cmd_f0(spec),
        "family": lambda: cmd_family(spec, args.kind, args.t),
        "classify": lambda: cmd_classify(spec, args.kind, args.t, args.fixtures, args.mangle),
        "genus2": lambda: cmd_genus2(spec, args.p or 101),
        "verify-all": lambda: cmd_verify_all(spec, args.fixtures),
    }
    return dispatch[args.command]()


def _error_report(args, exc: Exception) -> dict:
    inputs = {k: scalar_str(v) if isinstance(v, Fraction) else v
              for k, v in sorted(vars(args).items()) if k not in ("json", "command") and v is not None}
    return {"command": args.command, "inputs": inputs,
            "error": {"type": type(exc).__name__, "message": str(exc)}}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
        text, code = report.to_json(), report.exit_code
    except HypothesisViolation as exc:
        text, code = json.dumps(_error_report(args, exc), indent=2), EXIT_HYPOTHESIS
    except (HesscayError, DegenerateError) as exc:
        text, code = json.dumps(_error_report(args, exc), indent=2), EXIT_CHECK
    print(text)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
