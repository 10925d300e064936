"""The eight-element relative group acting on systems, the q parameter, the
three-index Pochhammer bracket, and the relations tying the split
sequences of the relatives together.

Words act on the right: apply(apply(s, g), h) = apply(s, compose(g, h)).
The canonical form of a word is rev_dual^a rev_primary^b swap^c, where
rev_dual reverses the dual eigenvalue order, rev_primary reverses the
primary one, and swap exchanges the two operators.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import splitparam as sp
from . import tdcore as td
from .polys import TauEtaFamily
from .scalars import Field, sqrt_in_field
from .tdcore import FAIL, PASS, SKIP, Check, InvariantViolation, TdSystem


@dataclass(frozen=True)
class D4Element:
    rev_dual: bool = False
    rev_primary: bool = False
    swap: bool = False

    @property
    def name(self) -> str:
        if self == IDENTITY:
            return "id"
        parts = []
        if self.rev_dual:
            parts.append("rev_dual")
        if self.rev_primary:
            parts.append("rev_primary")
        if self.swap:
            parts.append("swap")
        return "_".join(parts)

    def __repr__(self):
        return f"D4Element({self.name})"


IDENTITY = D4Element()
REV_DUAL = D4Element(rev_dual=True)
REV_PRIMARY = D4Element(rev_primary=True)
SWAP = D4Element(swap=True)

ALL_ELEMENTS = (
    IDENTITY,
    REV_DUAL,
    REV_PRIMARY,
    D4Element(rev_dual=True, rev_primary=True),
    SWAP,
    D4Element(rev_dual=True, swap=True),
    D4Element(rev_primary=True, swap=True),
    D4Element(rev_dual=True, rev_primary=True, swap=True),
)


def d4_compose(g: D4Element, h: D4Element) -> D4Element:
    """The word g followed by h, in canonical form.

    Pushing a trailing swap past reversal letters exchanges the two
    reversals (swap conjugates one reversal into the other), which is the
    whole group law of this dihedral group.
    """
    if g.swap:
        a = g.rev_dual ^ h.rev_primary
        b = g.rev_primary ^ h.rev_dual
    else:
        a = g.rev_dual ^ h.rev_dual
        b = g.rev_primary ^ h.rev_primary
    return D4Element(a, b, g.swap ^ h.swap)


def d4_inverse(g: D4Element) -> D4Element:
    for h in ALL_ELEMENTS:
        if d4_compose(g, h) == IDENTITY:
            return h
    raise RuntimeError("unreachable")


def apply_relative(sys: TdSystem, g: D4Element) -> TdSystem:
    """The relative of a system: reorderings and/or the operator swap.

    Pure data transform; revalidation lives in compute_orbit.
    """
    thetas = tuple(reversed(sys.thetas)) if g.rev_primary else sys.thetas
    thetas_star = tuple(reversed(sys.thetas_star)) if g.rev_dual else sys.thetas_star
    if g.swap:
        return TdSystem(sys.field, sys.n, sys.Astar, sys.A, thetas_star, thetas, sys.q_hint)
    return TdSystem(sys.field, sys.n, sys.A, sys.Astar, thetas, thetas_star, sys.q_hint)


@dataclass(frozen=True)
class QData:
    kind: str  # generic | one | minus_one | undetermined
    q: object = None
    beta: object = None
    chosen_root_note: str = ""


class BracketUnavailable(ValueError):
    """No bracket value can be produced for the requested q situation."""


def q_extract(sys: TdSystem) -> QData:
    """The common eigenvalue-ratio value and the q solving it.

    For d >= 3 every three-term ratio of both sequences must agree; the
    double-root cases of q^2 - (beta-1)q + 1 = 0 are exactly q = 1
    (beta = 3) and q = -1 (beta = -1).  Distinct roots are a reciprocal
    pair; the one with shortlex-smaller canonical text is chosen (the
    choice is immaterial: brackets are invariant under q <-> 1/q).
    """
    field, d = sys.field, sys.d
    ratios = []
    for seq in (sys.thetas, sys.thetas_star):
        for i in range(2, d):
            num = seq[i - 2] - seq[i + 1]
            den = seq[i - 1] - seq[i]
            ratios.append(num / den)
    if not ratios:
        if sys.q_hint is not None:
            return _classify_hint(field, sys.q_hint)
        return QData("undetermined", chosen_root_note="no ratio data for d <= 2 and no hint")
    beta = ratios[0]
    for k, r in enumerate(ratios[1:], start=1):
        if r != beta:
            raise InvariantViolation(
                "eigenvalue ratios are not constant",
                {"first": field.format(beta), "other": field.format(r), "position": k},
            )
    if beta == field.from_int(3):
        return QData("one", field.one, beta, "double root at 1")
    if beta == -field.one:
        return QData("minus_one", -field.one, beta, "double root at -1")
    b1 = beta - field.one
    disc = b1 * b1 - field.from_int(4)
    root = sqrt_in_field(field, disc)
    if root is None:
        note = "discriminant is not a square in the field"
        if sys.q_hint is not None:
            note += "; supplied q hint cannot satisfy the quadratic and was ignored"
        return QData("undetermined", beta=beta, chosen_root_note=note)
    two = field.from_int(2)
    r1 = (b1 + root) / two
    r2 = (b1 - root) / two
    q = _shortlex_min(field, r1, r2)
    other = r2 if q == r1 else r1
    return QData(
        "generic",
        q,
        beta,
        f"roots {field.format(r1)} and {field.format(r2)}; chose {field.format(q)} "
        f"(shortlex) over {field.format(other)}",
    )


def _classify_hint(field: Field, hint) -> QData:
    if hint == field.zero:
        raise ValueError("q hint must be nonzero")
    if hint == field.one:
        return QData("one", field.one, field.from_int(3), "q = 1 from hint")
    if hint == -field.one:
        return QData("minus_one", -field.one, -field.one, "q = -1 from hint")
    beta = hint + field.one / hint + field.one
    return QData("generic", hint, beta, "q from hint (d <= 2 has no ratio data)")


def _shortlex_min(field: Field, a, b):
    ta, tb = field.format(a), field.format(b)
    return a if (len(ta), ta) <= (len(tb), tb) else b


def q_pochhammer(field: Field, a, q, n: int):
    """(a; q)_n = (1-a)(1-aq)...(1-aq^(n-1))."""
    one = field.one
    acc = one
    term = a
    for _ in range(n):
        acc = acc * (one - term)
        term = term * q
    return acc


def bracket(field: Field, r: int, s: int, t: int, qd: QData):
    """The symmetric three-index Pochhammer ratio.

    Brackets with a zero index are 1 and need no q at all.  Generic q uses
    the Pochhammer formula; q = 1 uses the factorial-ratio limit (rejected
    in characteristic <= r+s+t, where a needed factorial vanishes); q = -1
    and undetermined q are unavailable.
    """
    if min(r, s, t) < 0:
        raise ValueError("bracket indices must be nonnegative")
    if min(r, s, t) == 0:
        return field.one
    if qd.kind == "generic":
        q = qd.q
        num = (
            q_pochhammer(field, q, q, r + s)
            * q_pochhammer(field, q, q, r + t)
            * q_pochhammer(field, q, q, s + t)
        )
        den = (
            q_pochhammer(field, q, q, r)
            * q_pochhammer(field, q, q, s)
            * q_pochhammer(field, q, q, t)
            * q_pochhammer(field, q, q, r + s + t)
        )
        if den == field.zero:
            raise BracketUnavailable(
                f"q has multiplicative order <= {r + s + t}; Pochhammer denominator vanishes"
            )
        return num / den
    if qd.kind == "one":
        char = field.characteristic
        if char != 0 and char <= r + s + t:
            raise BracketUnavailable(
                f"characteristic {char} divides a required factorial at q = 1"
            )
        num = _field_factorial(field, r + s) * _field_factorial(field, r + t) * _field_factorial(field, s + t)
        den = (
            _field_factorial(field, r)
            * _field_factorial(field, s)
            * _field_factorial(field, t)
            * _field_factorial(field, r + s + t)
        )
        return num / den
    if qd.kind == "minus_one":
        raise BracketUnavailable("no bracket value is defined here for q = -1")
    raise BracketUnavailable("q is undetermined and the bracket has all indices positive")


def _field_factorial(field: Field, n: int):
    acc = field.one
    for k in range(2, n + 1):
        acc = acc * field.from_int(k)
    return acc


def bracket_expansion_check(sys: TdSystem, qd: QData):
    """The eta-into-tau expansion with bracket coefficients, per degree.

    Checked as exact polynomial identities for every window size.  When
    brackets are unavailable the check is reported as skip with the reason.
    """
    field, d = sys.field, sys.d
    fam = TauEtaFamily(field, sys.thetas)
    witness_note = {"q_one_limit": True} if qd.kind == "one" else None
    try:
        for i in range(d + 1):
            lhs = fam.eta(i)
            rhs = None
            for h in range(i + 1):
                coeff = bracket(field, h, i - h, d - i, qd) * fam.eta_at(i - h, sys.thetas[0])
                term = fam.tau(h).scale(coeff)
                rhs = term if rhs is None else rhs + term
            if lhs != rhs:
                return Check(
                    "poly/eta_bracket_expansion",
                    FAIL,
                    {"i": i, "lhs": [field.format(c) for c in lhs.coeffs],
                     "rhs": [field.format(c) for c in rhs.coeffs]},
                )
    except BracketUnavailable as reason:
        return Check("poly/eta_bracket_expansion", SKIP, {"reason": str(reason)})
    return Check("poly/eta_bracket_expansion", PASS, witness_note)


def compute_orbit(sys: TdSystem, zetas=None):
    """Validate all eight relatives and compute their split data.

    Irreducibility is inherited (the relatives share the operator pair as a
    set, so invariant subspaces coincide); everything order-dependent is
    re-run from scratch.  Returns {name: dict} in the fixed element order.
    """
    orbit = {}
    for g in ALL_ELEMENTS:
        rel = apply_relative(sys, g)
        options = td.ValidateOptions(
            irreducibility="assume",
            assume_note="inherited: same operator pair as the validated base system",
        )
        report = td.validate(rel, options)
        if not report.passed():
            raise InvariantViolation(
                f"relative {g.name} failed validation", {"relative": g.name}
            )
        if not report.sharp:
            raise InvariantViolation(f"relative {g.name} is not sharp", {"relative": g.name})
        decomp = sp.split_decomposition(rel, report.idempotents, report.idempotents_star)
        rel_zetas = sp.split_sequence(rel, decomp)
        array = sp.parameter_array(rel, rel_zetas)
        orbit[g.name] = {
            "element": g,
            "system": rel,
            "report": report,
            "decomposition": decomp,
            "zetas": rel_zetas,
            "array": array,
            "shape": report.shape,
        }
    return orbit


def zeta_relations_check(sys: TdSystem, qd: QData, orbit: dict):
    """All split-sequence relations across the orbit.

    Bracket unavailability downgrades only the bracket-dependent relation
    checks to skip; the column-sharing and last-term statements never need
    brackets.
    """
    field, d = sys.field, sys.d
    checks = []

    shapes = {name: data["shape"] for name, data in orbit.items()}
    base_shape = shapes["id"]
    bad = {n: list(s) for n, s in shapes.items() if s != base_shape}
    checks.append(Check("orbit/shapes_equal", FAIL if bad else PASS, bad or None))

    pairs = [
        ("id", "swap"),
        ("rev_dual", "rev_dual_swap"),
        ("rev_primary", "rev_primary_swap"),
        ("rev_dual_rev_primary", "rev_dual_rev_primary_swap"),
    ]
    bad = None
    for a, b in pairs:
        if orbit[a]["zetas"] != orbit[b]["zetas"]:
            bad = {
                "pair": [a, b],
                "first": [field.format(z) for z in orbit[a]["zetas"]],
                "second": [field.format(z) for z in orbit[b]["zetas"]],
            }
            break
    checks.append(Check("orbit/column_sequences_equal", FAIL if bad else PASS, bad))

    z = orbit["id"]["zetas"]
    z_rd = orbit["rev_dual"]["zetas"]
    z_rp = orbit["rev_primary"]["zetas"]
    z_both = orbit["rev_dual_rev_primary"]["zetas"]

    fam_t = TauEtaFamily(field, sys.thetas)
    fam_s = TauEtaFamily(field, sys.thetas_star)
    pre_t = sp._prefix_products(field, list(sys.thetas), sys.thetas[0])
    pre_s = sp._prefix_products(field, list(sys.thetas_star), sys.thetas_star[0])
    suf_t = sp._prefix_products(field, list(reversed(sys.thetas)), sys.thetas[d])
    suf_s = sp._prefix_products(field, list(reversed(sys.thetas_star)), sys.thetas_star[d])

    relations = [
        ("orbit/relation_rev_dual", pre_t,
         lambda k: fam_s.eta_at(k, sys.thetas_star[0]), z_rd, z,
         lambda k: fam_s.tau_at(k, sys.thetas_star[d])),
        ("orbit/relation_rev_primary", pre_s,
         lambda k: fam_t.eta_at(k, sys.thetas[0]), z_rp, z,
         lambda k: fam_t.tau_at(k, sys.thetas[d])),
        ("orbit/relation_rev_both_from_rev_dual", suf_s,
         lambda k: fam_t.eta_at(k, sys.thetas[0]), z_both, z_rd,
         lambda k: fam_t.tau_at(k, sys.thetas[d])),
        ("orbit/relation_rev_both_from_rev_primary", suf_t,
         lambda k: fam_s.eta_at(k, sys.thetas_star[0]), z_both, z_rp,
         lambda k: fam_s.tau_at(k, sys.thetas_star[d])),
    ]
    q_note = {"q_one_limit": True} if qd.kind == "one" else None
    for check_id, dens, weight_fwd, z_new, z_old, weight_inv in relations:
        try:
            bad = _relation_witness(field, d, qd, dens, weight_fwd, z_new, z_old)
            if bad is None:
                bad = _relation_witness(field, d, qd, dens, weight_inv, z_old, z_new)
                if bad is not None:
                    bad["direction"] = "inverse"
            else:
                bad["direction"] = "forward"
        except BracketUnavailable as reason:
            checks.append(Check(check_id, SKIP, {"reason": str(reason)}))
            continue
        checks.append(Check(check_id, FAIL if bad else PASS, bad or q_note))

    weighted = sp.weighted_zeta_sum(sys, z)
    bad = None
    for name in ("id", "swap", "rev_dual_rev_primary", "rev_dual_rev_primary_swap"):
        if orbit[name]["zetas"][d] != z[d]:
            bad = {"relative": name, "last_term": field.format(orbit[name]["zetas"][d])}
            break
    checks.append(Check("orbit/last_term_unchanged_group", FAIL if bad else PASS, bad))

    bad = None
    for name in ("rev_dual", "rev_primary", "rev_dual_swap", "rev_primary_swap"):
        if orbit[name]["zetas"][d] != weighted:
            bad = {
                "relative": name,
                "last_term": field.format(orbit[name]["zetas"][d]),
                "weighted_sum": field.format(weighted),
            }
            break
    checks.append(Check("orbit/last_term_weighted_group", FAIL if bad else PASS, bad))

    # cross-consistency: the rev_primary relation at i = d (all brackets have a
    # zero index there) must reproduce the weighted sum.
    acc = field.zero
    for h in range(d + 1):
        acc = acc + fam_t.eta_at(d - h, sys.thetas[0]) * (pre_s[d] / pre_s[h]) * z[h]
    bad = None
    if acc != weighted or z_rp[d] != acc:
        bad = {
            "relation_value": field.format(acc),
            "weighted_sum": field.format(weighted),
            "last_term": field.format(z_rp[d]),
        }
    checks.append(Check("orbit/last_term_cross_consistency", FAIL if bad else PASS, bad))
    return checks


def _relation_witness(field, d, qd, dens, weight_at, z_lhs, z_rhs):
    """One direction of a relation: z_lhs through brackets from z_rhs."""
    for i in range(d + 1):
        lhs = z_lhs[i] / dens[i]
        rhs = field.zero
        for h in range(i + 1):
            rhs = rhs + bracket(field, h, i - h, d - i, qd) * weight_at(i - h) * z_rhs[h] / dens[h]
        if lhs != rhs:
            return {"i": i, "lhs": field.format(lhs), "rhs": field.format(rhs)}
    return None


def orbit_report(sys: TdSystem, qd: QData | None = None, orbit: dict | None = None):
    """Parameter arrays of all eight relatives plus the relation verdicts."""
    if orbit is None:
        orbit = compute_orbit(sys)
    if qd is None:
        qd = q_extract(sys)
    checks = zeta_relations_check(sys, qd, orbit)
    entries = []
    for g in ALL_ELEMENTS:
        data = orbit[g.name]
        entries.append(
            {
                "relative": g.name,
                "theta": list(data["array"].thetas),
                "theta_star": list(data["array"].thetas_star),
                "zeta": list(data["array"].zetas),
                "shape": list(data["shape"]),
            }
        )
    return {"orbit": entries, "checks": checks, "q": qd}
