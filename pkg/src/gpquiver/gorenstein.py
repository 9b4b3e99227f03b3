"""Certificate-producing membership tests for Gorenstein-projectivity classes.

Every test returns a Verdict: a yes/no answer backed by a checkable
certificate, or an explicit "inconclusive" carrying the blocking cutoff.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .basechange import Factorization
from .category import BoundQuiverCategory
from .linalg import Matrix, PrimeField
from .modules import (
    Module,
    ModuleMap,
    ModuleError,
    _ext_from_resolution,
    _tor_from_resolution_of_left,
    dual,
    hom_basis,
    kernel,
    map_vec,
    projective_cover,
    projective_resolution,
    representable,
)
from .nakayama import NakayamaEngine


@dataclass
class Verdict:
    member: str  # "yes" | "no" | "inconclusive"
    certificate: dict = field(default_factory=dict)
    hypotheses: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.member not in ("yes", "no", "inconclusive"):
            raise ValueError(f"bad verdict value {self.member!r}")

    @property
    def is_yes(self) -> bool:
        return self.member == "yes"


@dataclass
class BaseGorensteinProfile:
    base: BoundQuiverCategory
    g: int | None
    status: str  # "verified-at-cutoff" | "declared" | "unknown"
    cutoff: int | None = None
    tables: dict = field(default_factory=dict)


def self_injective_dimension(base: BoundQuiverCategory, cutoff: int = 16) -> BaseGorensteinProfile:
    """Profile the base algebra: the two-sided projective dimension of its
    dual regular bimodule, when that settles below the cutoff."""
    eng = NakayamaEngine(base, cutoff)
    g = eng.gorenstein_dimension()
    tables = {"left": g.left_pdims, "right": g.right_pdims}
    if g.finite:
        return BaseGorensteinProfile(base, g.value, "verified-at-cutoff", cutoff, tables)
    return BaseGorensteinProfile(base, None, "unknown", cutoff, tables)


def declared_profile(base: BoundQuiverCategory, g: int) -> BaseGorensteinProfile:
    return BaseGorensteinProfile(base, g, "declared")


# -- Gorenstein P-projectivity ---------------------------------------------


def is_gproj_P(f_mod: Module, engine: NakayamaEngine, force_full: bool = False) -> Verdict:
    """Membership of F in the Gorenstein P-projective representations.

    If the coefficient bimodule has finite projective dimension g on both
    sides the vanishing of L_i nu for 1 <= i <= g is decisive; otherwise the
    full three-part criterion runs up to the cutoff:
      (a) L_i nu (F) = 0 for i > 0,
      (b) R^i nu^- (nu F) = 0 for i > 0,
      (c) the unit F -> nu^- nu F is an isomorphism.
    """
    cat = engine.cat
    cutoff = engine.cutoff
    g = engine.gorenstein_dimension()
    if g.finite and not force_full:
        table = {}
        for i in range(1, g.value + 1):
            vals = engine.left_derived_nu_dims(f_mod, i)
            table[i] = {c: (v.dim if v.conclusive else None) for c, v in vals.items()}
            for c in cat.objects:
                v = vals[c]
                if v.conclusive and v.dim > 0:
                    return Verdict(
                        "no",
                        {"route": "shortcut", "l_nu_dims": table,
                         "failure": {"functor": "L_nu", "degree": i, "object": c,
                                     "dim": v.dim}},
                        {"P_iwanaga_gorenstein": g.value, "cutoff": cutoff},
                    )
        if all(v is not None for row in table.values() for v in row.values()):
            return Verdict("yes", {"route": "shortcut", "l_nu_dims": table},
                           {"P_iwanaga_gorenstein": g.value, "cutoff": cutoff})
        return Verdict("inconclusive",
                       {"route": "shortcut", "l_nu_dims": table},
                       {"P_iwanaga_gorenstein": g.value, "cutoff": cutoff})

    hyp = {"P_iwanaga_gorenstein": g.value if g.finite else None, "cutoff": cutoff}
    cert = {"route": "full"}

    # (a) vanishing of the left derived Nakayama functor
    res_f = projective_resolution(f_mod, cutoff)
    max_a = res_f.length() if res_f.completed else cutoff - 1
    a_table = {}
    a_settled = True
    for i in range(1, max_a + 1):
        row = {}
        for c in cat.objects:
            v = _tor_from_resolution_of_left(engine.coef_right(c), res_f, i)
            row[c] = v.dim if v.conclusive else None
            if v.conclusive and v.dim > 0:
                a_table[i] = row
                cert["l_nu_dims"] = a_table
                cert["failure"] = {"functor": "L_nu", "degree": i, "object": c,
                                   "dim": v.dim}
                return Verdict("no", cert, hyp)
            if not v.conclusive:
                a_settled = False
        a_table[i] = row
    if not res_f.completed:
        a_settled = False
    cert["l_nu_dims"] = a_table

    # (b) vanishing of the right derived inverse on nu F
    nuF = engine.nu(f_mod).module
    res_dual = projective_resolution(dual(nuF), cutoff)
    max_b = res_dual.length() if res_dual.completed else cutoff - 1
    b_table = {}
    b_settled = True
    for i in range(1, max_b + 1):
        row = {}
        for c in cat.objects:
            v = _ext_from_resolution(engine.res_left(c), nuF, i)
            if not v.conclusive:
                v = _ext_from_resolution(res_dual, dual(engine.coef_left(c)), i)
            row[c] = v.dim if v.conclusive else None
            if v.conclusive and v.dim > 0:
                b_table[i] = row
                cert["r_nu_minus_dims"] = b_table
                cert["failure"] = {"functor": "R_nu_minus", "degree": i, "object": c,
                                   "dim": v.dim}
                return Verdict("no", cert, hyp)
            if not v.conclusive:
                b_settled = False
        b_table[i] = row
    if not res_dual.completed:
        b_settled = False
    cert["r_nu_minus_dims"] = b_table

    # (c) the unit is an isomorphism
    lam = engine.lambda_unit(f_mod)
    lam_table = {
        c: {"rank": lam.mats[c].rank(), "src_dim": f_mod.dims[c],
            "dst_dim": lam.dst.dims[c]}
        for c in cat.objects
    }
    cert["lambda_ranks"] = lam_table
    if not lam.is_iso():
        bad = next(c for c in cat.objects
                   if lam_table[c]["rank"] != lam_table[c]["src_dim"]
                   or lam_table[c]["src_dim"] != lam_table[c]["dst_dim"])
        cert["failure"] = {"functor": "lambda", "object": bad}
        return Verdict("no", cert, hyp)

    if a_settled and b_settled:
        return Verdict("yes", cert, hyp)
    cert["blocking_cutoff"] = cutoff
    return Verdict("inconclusive", cert, hyp)


def is_monic(f_mod: Module) -> Verdict:
    """Injectivity of the assembled incoming-arrow matrix at every vertex.

    Only meaningful over a relation-free category, where it coincides with
    Gorenstein P-projectivity."""
    cat = f_mod.cat
    if cat.relations:
        raise ModuleError(
            "monicity characterizes Gorenstein P-projectivity only for "
            "relation-free categories; use is_gproj_P instead"
        )
    fieldk = cat.field
    ranks = {}
    for i in cat.objects:
        incoming = sorted(a for a, (s, t) in cat.arrow_map.items() if t == i)
        acc = Matrix.zeros(fieldk, f_mod.dims[i], 0)
        for a in incoming:
            acc = acc.hstack(f_mod.mats[a])
        rk, ker_basis = acc.rank_and_kernel()
        ranks[i] = {"arrows": incoming, "domain_dim": acc.cols, "rank": rk}
        if rk < acc.cols:
            witness = {}
            off = 0
            for a in incoming:
                w = f_mod.mats[a].cols
                witness[a] = [fieldk.fmt(ker_basis.data[off + r][0]) for r in range(w)]
                off += w
            return Verdict(
                "no",
                {"object": i, "kernel_dim": acc.cols - rk, "witness": witness,
                 "ranks": ranks},
            )
    return Verdict("yes", {"ranks": ranks})


# -- splitting of the counit P(F) -> F -------------------------------------


def _combine_maps(basis: list, coeffs: Matrix) -> ModuleMap:
    src, dst = basis[0].src, basis[0].dst
    f = src.cat.field
    mats = {}
    for c in src.cat.objects:
        acc = Matrix.zeros(f, dst.dims[c], src.dims[c])
        for k, b in enumerate(basis):
            acc = acc + b.mats[c].scale(coeffs.data[k][0])
        mats[c] = acc
    return ModuleMap(src, dst, mats, check=False)


def splitting_section(eps: ModuleMap) -> ModuleMap | None:
    """A module map s with s . eps = id on the target of eps, if one exists."""
    F = eps.dst
    if F.is_zero():
        return ModuleMap(F, eps.src, {c: Matrix.zeros(F.cat.field, eps.src.dims[c], 0)
                                      for c in F.cat.objects}, check=False)
    basis = hom_basis(F, eps.src)
    if not basis:
        return None
    f = F.cat.field
    cols = [map_vec(b.then(eps)) for b in basis]
    A = Matrix.zeros(f, cols[0].rows, 0)
    for col in cols:
        A = A.hstack(col)
    rhs = map_vec(ModuleMap.identity(F))
    sol = A.solve(rhs)
    if sol is None:
        return None
    return _combine_maps(basis, sol)


def is_p_projective(f_mod: Module, engine: NakayamaEngine,
                    fact: Factorization | None = None) -> Verdict:
    """Summand-of-i_! test: does the counit P(F) -> F split?"""
    if fact is None:
        PF, eps = engine.counit_P(f_mod)
    else:
        PF, eps = fact.p_counit_based(f_mod)
    sec = splitting_section(eps)
    if sec is None:
        return Verdict("no", {"test": "counit-splitting",
                              "p_dims": dict(PF.dims)})
    return Verdict("yes", {"test": "counit-splitting",
                           "p_dims": dict(PF.dims),
                           "section_found": True})


# -- Gorenstein projectivity over the base ---------------------------------


def is_base_projective(n_mod: Module) -> Verdict:
    cov = projective_cover(n_mod)
    ker, _ = kernel(cov.epi)
    if ker.is_zero():
        return Verdict("yes", {"reason": "projective",
                               "cover_summands": [c for c, _ in cov.summands]})
    return Verdict("no", {"reason": "cover-kernel",
                          "kernel_dims": dict(ker.dims)})


def base_gp(n_mod: Module, profile: BaseGorensteinProfile, cutoff: int = 16) -> Verdict:
    """Gorenstein projectivity over the base algebra.

    Projectives pass outright. With a finite self-injective dimension g the
    test is Ext^i(N, representables) = 0 for 1 <= i <= g; without one, an
    all-zero Ext scan below the cutoff is reported as inconclusive, never as
    a bare yes.
    """
    base = n_mod.cat
    hyp = {"base_self_injective_dimension": profile.g,
           "profile_status": profile.status, "cutoff": cutoff}
    proj = is_base_projective(n_mod)
    if proj.is_yes:
        return Verdict("yes", proj.certificate, hyp)
    res = projective_resolution(n_mod, cutoff)

    if profile.g is not None:
        table = {}
        settled = True
        for i in range(1, profile.g + 1):
            row = {}
            for c in base.objects:
                v = _ext_from_resolution(res, representable(base, c), i)
                row[c] = v.dim if v.conclusive else None
                if v.conclusive and v.dim > 0:
                    table[i] = row
                    return Verdict("no", {"ext_dims": table,
                                          "failure": {"degree": i, "object": c,
                                                      "dim": v.dim}}, hyp)
                if not v.conclusive:
                    settled = False
            table[i] = row
        if settled:
            return Verdict("yes", {"ext_dims": table}, hyp)
        return Verdict("inconclusive", {"ext_dims": table,
                                        "blocking_cutoff": cutoff}, hyp)

    # unknown profile
    if res.completed:
        # finite projective dimension: Gorenstein projective would force
        # projective, and the cover kernel is nonzero
        return Verdict("no", {"reason": "finite-nonzero-projective-dimension",
                              "pdim": res.length()}, hyp)
    table = {}
    for i in range(1, cutoff):
        row = {}
        for c in base.objects:
            v = _ext_from_resolution(res, representable(base, c), i)
            row[c] = v.dim if v.conclusive else None
            if v.conclusive and v.dim > 0:
                table[i] = row
                return Verdict("no", {"ext_dims": table,
                                      "failure": {"degree": i, "object": c,
                                                  "dim": v.dim}}, hyp)
        table[i] = row
    return Verdict("inconclusive",
                   {"ext_dims": table, "blocking_cutoff": cutoff,
                    "note": "Ext vanishing verified only below the cutoff"},
                   hyp)


# -- Gorenstein projectivity of a based representation ---------------------


def _components_of_i_star_nu(f_mod: Module, engine: NakayamaEngine,
                             fact: Factorization | None) -> tuple:
    """(restriction to the C-direction, base-valued components of i^*(nu F))."""
    if fact is None:
        restriction = f_mod
        nuF = engine.nu(f_mod).module
        comps = {c: nuF.dims[c] for c in engine.cat.objects}
        return restriction, comps
    restriction = fact.restrict_to_cat(f_mod)
    comps = fact.i_star_nu_components(f_mod, engine)
    return restriction, comps


def _gp_regime(engine: NakayamaEngine, profile: BaseGorensteinProfile | None) -> str:
    g = engine.gorenstein_dimension()
    if g.finite:
        return "P-Iwanaga-Gorenstein"
    if profile is not None and profile.g is not None:
        return "base-Proj-Gorenstein"
    return "membership in GP(GProj_P) only"


def is_gp_functor(f_mod: Module, engine: NakayamaEngine,
                  profile: BaseGorensteinProfile | None = None,
                  fact: Factorization | None = None,
                  force_full: bool = False) -> Verdict:
    """Gorenstein projectivity of a representation with base-algebra values:
    the restriction must be Gorenstein P-projective and every base component
    of i^*(nu F) must be Gorenstein projective over the base."""
    restriction, comps = _components_of_i_star_nu(f_mod, engine, fact)
    xv = is_gproj_P(restriction, engine, force_full=force_full)
    hyp = {"interpretation": _gp_regime(engine, profile),
           "P_iwanaga_gorenstein": engine.gorenstein_dimension().value,
           "base_self_injective_dimension": profile.g if profile else 0,
           "cutoff": engine.cutoff}
    cert = {"x_side": {"member": xv.member, "certificate": xv.certificate}}
    if fact is None:
        cert["f_side"] = {"base": "field", "component_dims": comps,
                          "member": "yes"}
        members = [xv.member, "yes"]
    else:
        if profile is None:
            profile = self_injective_dimension(fact.base, engine.cutoff)
            hyp["base_self_injective_dimension"] = profile.g
            hyp["interpretation"] = _gp_regime(engine, profile)
        fv = {c: base_gp(comps[c], profile, engine.cutoff) for c in engine.cat.objects}
        cert["f_side"] = {
            c: {"member": fv[c].member, "certificate": fv[c].certificate}
            for c in engine.cat.objects
        }
        members = [xv.member] + [fv[c].member for c in engine.cat.objects]
    if "no" in members:
        return Verdict("no", cert, hyp)
    if all(m == "yes" for m in members):
        return Verdict("yes", cert, hyp)
    cert["blocking_cutoff"] = engine.cutoff
    return Verdict("inconclusive", cert, hyp)


def lifted_class_membership(f_mod: Module, x_class: str, f_class: str,
                            engine: NakayamaEngine,
                            profile: BaseGorensteinProfile | None = None,
                            fact: Factorization | None = None) -> Verdict:
    """Membership in one of the four admissible lifted classes: the X-side
    condition on the restriction crossed with the F-side condition on the
    base components of i^*(nu F)."""
    if x_class not in ("gproj_P", "P_proj"):
        raise ModuleError(f"unknown x_class {x_class!r}")
    if f_class not in ("gp", "proj"):
        raise ModuleError(f"unknown f_class {f_class!r}")
    restriction, comps = _components_of_i_star_nu(f_mod, engine, fact)
    if x_class == "gproj_P":
        xv = is_gproj_P(restriction, engine)
    else:
        xv = is_p_projective(f_mod, engine, fact)
    cert = {"x_class": x_class, "f_class": f_class,
            "x_side": {"member": xv.member, "certificate": xv.certificate}}
    hyp = {"cutoff": engine.cutoff}
    if fact is None:
        cert["f_side"] = {"base": "field", "component_dims": comps,
                          "member": "yes"}
        members = [xv.member, "yes"]
    else:
        if profile is None:
            profile = self_injective_dimension(fact.base, engine.cutoff)
        hyp["base_self_injective_dimension"] = profile.g
        fv = {}
        for c in engine.cat.objects:
            if f_class == "gp":
                fv[c] = base_gp(comps[c], profile, engine.cutoff)
            else:
                fv[c] = is_base_projective(comps[c])
        cert["f_side"] = {c: {"member": fv[c].member,
                              "certificate": fv[c].certificate}
                          for c in engine.cat.objects}
        members = [xv.member] + [fv[c].member for c in engine.cat.objects]
    if "no" in members:
        return Verdict("no", cert, hyp)
    if all(m == "yes" for m in members):
        return Verdict("yes", cert, hyp)
    cert["blocking_cutoff"] = engine.cutoff
    return Verdict("inconclusive", cert, hyp)


# -- Gorenstein-projective resolution dimension ----------------------------


def gp_resolution_dimension(f_mod: Module, engine: NakayamaEngine,
                            profile: BaseGorensteinProfile | None = None,
                            fact: Factorization | None = None,
                            max_steps: int | None = None):
    """First stage of the minimal projective resolution whose syzygy is
    Gorenstein projective; returns (value, per-stage verdicts) with value
    None meaning ">= cutoff"."""
    limit = engine.cutoff if max_steps is None else max_steps
    current = f_mod
    verdicts = []
    for k in range(limit + 1):
        v = is_gp_functor(current, engine, profile, fact)
        verdicts.append(v.member)
        if v.is_yes:
            return k, verdicts
        cov = projective_cover(current)
        current, _ = kernel(cov.epi)
    return None, verdicts


# -- discrepancy probe ------------------------------------------------------


def exactness_table(f_mod: Module) -> list:
    """For each composable arrow pair with vanishing composite, compare the
    image of the first action with the kernel of the second."""
    cat = f_mod.cat
    out = []
    for a in sorted(cat.arrow_map):
        s, t = cat.arrow_map[a]
        for b in sorted(cat.arrow_map):
            s2, t2 = cat.arrow_map[b]
            if s2 != t:
                continue
            red = cat.reduce_word(s, (a, b))
            if any(v != cat.field.zero() for v in red.values()):
                continue
            rank_a = f_mod.mats[a].rank()
            rk_b, _ = f_mod.mats[b].rank_and_kernel()
            ker_b = f_mod.mats[b].cols - rk_b
            out.append({"first": a, "second": b,
                        "image_rank": rank_a, "kernel_dim": ker_b,
                        "exact": rank_a == ker_b})
    return out


def discrepancy_probe(m_mod: Module, fact_a: Factorization, fact_b: Factorization,
                      cutoff: int = 16) -> dict:
    """Membership of the same total module under two tensor factorizations;
    a (member, non-member) pair witnesses a nonzero discrepancy class."""
    if fact_a.total != m_mod.cat or fact_b.total != m_mod.cat:
        raise ModuleError("factorizations must present the module's category")
    out = {}
    for tag, fact in (("first", fact_a), ("second", fact_b)):
        engine = NakayamaEngine(fact.cat, cutoff)
        profile = self_injective_dimension(fact.base, cutoff)
        v = is_gp_functor(m_mod, engine, profile, fact)
        entry = {"verdict": v,
                 "cat_side": fact.cat_side,
                 "restriction_exactness": exactness_table(fact.restrict_to_cat(m_mod))}
        out[tag] = entry
    out["discrepancy"] = (
        {out["first"]["verdict"].member, out["second"]["verdict"].member}
        == {"yes", "no"}
    )
    return out


# -- exhaustive enumeration -------------------------------------------------

ENUMERATION_LIMIT = 2_000_000


def enumerate_representations(cat: BoundQuiverCategory, dim_bounds,
                              limit: int = ENUMERATION_LIMIT):
    """All representations over a prime field with per-object dimensions up
    to the given bounds, in a fixed deterministic order; relations are
    enforced by filtering. Refuses when the raw matrix-assignment count
    (before relation filtering) exceeds the limit."""
    f = cat.field
    if not isinstance(f, PrimeField):
        raise ModuleError("exhaustive enumeration needs a finite prime field")
    p = f.p
    if isinstance(dim_bounds, int):
        bounds = {c: dim_bounds for c in cat.objects}
    else:
        bounds = dict(dim_bounds)
    arrows = sorted(cat.arrow_map)
    total = 0
    dim_choices = list(itertools.product(*(range(bounds[c] + 1) for c in cat.objects)))
    for choice in dim_choices:
        dims = dict(zip(cat.objects, choice))
        cells = sum(dims[t] * dims[s] for a in arrows for s, t in [cat.arrow_map[a]])
        total += p ** cells
        if total > limit:
            raise ModuleError(
                f"raw enumeration space exceeds the documented limit {limit}"
            )
    for choice in dim_choices:
        dims = dict(zip(cat.objects, choice))
        shapes = [(a, dims[cat.arrow_map[a][1]], dims[cat.arrow_map[a][0]]) for a in arrows]
        cell_counts = [r * c for _, r, c in shapes]
        for assignment in itertools.product(*(range(p ** n) for n in cell_counts)):
            mats = {}
            for (a, r, c), code in zip(shapes, assignment):
                entries = []
                rem = code
                for _ in range(r * c):
                    entries.append(rem % p)
                    rem //= p
                mats[a] = Matrix(f, [entries[i * c:(i + 1) * c] for i in range(r)], r, c)
            m = Module(cat, dims, mats, check=False)
            if _relations_hold(m):
                yield m


def _relations_hold(m: Module) -> bool:
    cat = m.cat
    for rel in cat.relations:
        s, _ = rel.endpoints(cat.arrow_map)
        acc = None
        for coeff, path in rel.terms:
            term = m.act_path(s, path).scale(coeff)
            acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            return False
    return True
