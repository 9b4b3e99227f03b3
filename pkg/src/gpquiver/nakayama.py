"""The Nakayama functor nu = D(C) (x)_C -, its right adjoint, the adjoint
triple around evaluation, derived functors, and the Gorenstein dimension of
the projectivization endofunctor P.

Coefficient modules D(C(c,-)) (right) and D(C(-,c)) (left) and their minimal
resolutions are cached per category, so sweeping many representations of the
same category stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import BoundQuiverCategory
from .linalg import Matrix, Subquotient
from .modules import (
    Cover,
    DerivedValue,
    InconclusiveError,
    Module,
    ModuleMap,
    ModuleError,
    Resolution,
    _ext_from_resolution,
    _tor_from_resolution_of_left,
    _tor_from_resolution_of_right,
    chain_lift,
    direct_sum_modules,
    dual,
    dual_map,
    free_on_generators,
    hom_basis,
    hom_coords,
    homology_of_modules,
    projective_resolution,
    pdim,
    representable,
    tensor_induced,
    tensor_over_cat,
    zero_module,
)


@dataclass
class NuApplied:
    """nu(F) together with the tensor presentations used at each object."""

    module: Module
    data: dict  # object -> TensorResult
    source: Module


@dataclass
class NuMinusApplied:
    """nu^-(F) together with the hom bases used at each object."""

    module: Module
    bases: dict  # object -> list of ModuleMap coef_left[c] -> F
    source: Module


@dataclass
class GorensteinDimension:
    """Result of the two-sided coefficient pdim computation."""

    value: int | None
    status: str               # "finite" or "not-Iwanaga-Gorenstein-at-cutoff"
    left_pdims: dict          # c -> pdim D(C(-,c)) over C, None = unsettled
    right_pdims: dict         # c -> pdim D(C(c,-)) over C^op, None = unsettled
    cutoff: int

    @property
    def finite(self) -> bool:
        return self.status == "finite"


def precomposition(cat: BoundQuiverCategory, arrow: str) -> ModuleMap:
    """For a: s -> t, the map C(t,-) -> C(s,-) given by q -> q after a."""
    s, t = cat.arrow_map[arrow]
    src = representable(cat, t)
    dst = representable(cat, s)
    f = cat.field
    mats = {}
    for x in cat.objects:
        idx = {p: i for i, p in enumerate(cat.hom_basis_paths(s, x))}
        cols = cat.hom_basis_paths(t, x)
        data = [[f.zero()] * len(cols) for _ in idx]
        for j, p in enumerate(cols):
            for q, coef in cat.reduce_word(s, (arrow,) + p).items():
                data[idx[q]][j] = coef
        mats[x] = Matrix(f, data, len(idx), len(cols))
    return ModuleMap(src, dst, mats, check=False)


class NakayamaEngine:
    """All Nakayama-side computations for one category, with caching."""

    def __init__(self, cat: BoundQuiverCategory, cutoff: int = 16):
        self.cat = cat
        self.op = cat.opposite()
        self.cutoff = cutoff
        self._coef_right: dict = {}
        self._coef_left: dict = {}
        self._res_right: dict = {}
        self._res_left: dict = {}
        self._u: dict = {}
        self._w: dict = {}
        self._u_lifts: dict = {}
        self._op_to_c: dict = {}
        self._gdim: GorensteinDimension | None = None

    # -- coefficient bimodule ---------------------------------------------

    def coef_right(self, c) -> Module:
        """D(C(c,-)): the value of D(C) at c, a right module."""
        if c not in self._coef_right:
            self._coef_right[c] = dual(representable(self.cat, c))
        return self._coef_right[c]

    def coef_left(self, c) -> Module:
        """D(C(-,c)): a left module, the c-th injective I(c)."""
        if c not in self._coef_left:
            self._coef_left[c] = dual(representable(self.op, c))
        return self._coef_left[c]

    def res_right(self, c) -> Resolution:
        if c not in self._res_right:
            self._res_right[c] = projective_resolution(self.coef_right(c), self.cutoff)
        return self._res_right[c]

    def res_left(self, c) -> Resolution:
        if c not in self._res_left:
            self._res_left[c] = projective_resolution(self.coef_left(c), self.cutoff)
        return self._res_left[c]

    def u_map(self, arrow: str) -> ModuleMap:
        """D(C(s,-)) -> D(C(t,-)) for a: s -> t (covariant coefficient maps)."""
        if arrow not in self._u:
            self._u[arrow] = dual_map(precomposition(self.cat, arrow))
        return self._u[arrow]

    def w_map(self, arrow: str) -> ModuleMap:
        """D(C(-,t)) -> D(C(-,s)) for a: s -> t (contravariant coefficient maps)."""
        if arrow not in self._w:
            self._w[arrow] = dual_map(precomposition(self.op, arrow))
        return self._w[arrow]

    def u_lift(self, arrow: str, upto: int) -> list:
        key = (arrow, upto)
        if key not in self._u_lifts:
            s, t = self.cat.arrow_map[arrow]
            self._u_lifts[key] = chain_lift(self.res_right(s), self.res_right(t), self.u_map(arrow), upto)
        return self._u_lifts[key]

    def op_to_c(self, x, c) -> Matrix:
        """Change of basis from the opposite-side path basis of Hom(x, c) to
        the direct-side one (reversal is an anti-isomorphism)."""
        key = (x, c)
        if key not in self._op_to_c:
            f = self.cat.field
            c_basis = self.cat.hom_basis_paths(x, c)
            idx = {p: i for i, p in enumerate(c_basis)}
            op_basis = self.op.hom_basis_paths(c, x)
            data = [[f.zero()] * len(op_basis) for _ in c_basis]
            for j, w in enumerate(op_basis):
                for p, coef in self.cat.reduce_word(x, tuple(reversed(w))).items():
                    data[idx[p]][j] = coef
            self._op_to_c[key] = Matrix(f, data, len(c_basis), len(op_basis))
        return self._op_to_c[key]

    # -- the adjoint triple ------------------------------------------------

    def i_shriek(self, parts: dict) -> Cover:
        """(+)_c C(c,-) (x) k^{n_c}.

        Returns a Cover whose summand list records the source object of each
        representable summand, in object order.
        """
        cat = self.cat
        for c in parts:
            if c not in cat.objects:
                raise ModuleError(f"unknown object {c!r} in parts")
        summands = []
        for c in cat.objects:
            for _ in range(int(parts.get(c, 0))):
                summands.append(c)
        mods = [representable(cat, c) for c in summands]
        if mods:
            total, _, _ = direct_sum_modules(mods)
        else:
            total = zero_module(cat)
        return Cover(total, ModuleMap.identity(total), [(c, None) for c in summands])

    def i_shriek_module(self, parts: dict) -> Module:
        return self.i_shriek(parts).module

    def i_star_restrict(self, f_mod: Module) -> dict:
        return dict(f_mod.dims)

    def counit_P(self, f_mod: Module) -> tuple:
        """P(F) = i_! i^* F with its action epimorphism onto F."""
        f = self.cat.field
        gens = []
        for c in self.cat.objects:
            for j in range(f_mod.dims[c]):
                col = Matrix.zeros(f, f_mod.dims[c], 1)
                col.data[j][0] = f.one()
                gens.append((c, col))
        cov = free_on_generators(f_mod, gens)
        return cov.module, cov.epi

    def unit_parts(self, parts: dict) -> dict:
        """parts -> i^* i_!(parts): per-object inclusion at the identity path."""
        cat = self.cat
        f = cat.field
        shriek = self.i_shriek(parts)
        total = shriek.module
        mats = {}
        for c in cat.objects:
            n = int(parts.get(c, 0))
            m = Matrix.zeros(f, total.dims[c], n)
            # locate the identity-path coordinate of each summand at c
            row = 0
            seen = 0
            for (obj, _) in shriek.summands:
                paths = cat.hom_basis_paths(obj, c)
                if obj == c:
                    m.data[row + paths.index(())][seen] = f.one()
                    seen += 1
                row += len(paths)
            mats[c] = m
        return mats

    def i_star_coinduced(self, parts: dict) -> Module:
        """(+)_c D(C(-,c)) (x) k^{n_c}: the coinduction i_* = nu after i_!."""
        mods = []
        for c in self.cat.objects:
            for _ in range(int(parts.get(c, 0))):
                mods.append(self.coef_left(c))
        if mods:
            total, _, _ = direct_sum_modules(mods)
            return total
        return zero_module(self.cat)

    # -- nu and nu^- -------------------------------------------------------

    def nu(self, f_mod: Module) -> NuApplied:
        cat = self.cat
        data = {c: tensor_over_cat(self.coef_right(c), f_mod) for c in cat.objects}
        dims = {c: data[c].dim for c in cat.objects}
        mats = {}
        for name, (s, t) in cat.arrow_map.items():
            mats[name] = tensor_induced(data[s], data[t], cat, self.u_map(name), None)
        return NuApplied(Module(cat, dims, mats, check=False), data, f_mod)

    def nu_map(self, src: NuApplied, dst: NuApplied, phi: ModuleMap) -> ModuleMap:
        cat = self.cat
        mats = {
            c: tensor_induced(src.data[c], dst.data[c], cat, None, phi)
            for c in cat.objects
        }
        return ModuleMap(src.module, dst.module, mats, check=False)

    def nu_minus(self, f_mod: Module) -> NuMinusApplied:
        cat = self.cat
        bases = {c: hom_basis(self.coef_left(c), f_mod) for c in cat.objects}
        dims = {c: len(bases[c]) for c in cat.objects}
        mats = {}
        for name, (s, t) in cat.arrow_map.items():
            w = self.w_map(name)  # coef_left[t] -> coef_left[s]
            cols = [hom_coords(bases[t], w.then(psi)) for psi in bases[s]]
            acc = Matrix.zeros(cat.field, dims[t], 0)
            for col in cols:
                acc = acc.hstack(col)
            mats[name] = acc
        return NuMinusApplied(Module(cat, dims, mats, check=False), bases, f_mod)

    def nu_minus_map(self, src: NuMinusApplied, dst: NuMinusApplied, phi: ModuleMap) -> ModuleMap:
        cat = self.cat
        mats = {}
        for c in cat.objects:
            cols = [hom_coords(dst.bases[c], psi.then(phi)) for psi in src.bases[c]]
            acc = Matrix.zeros(cat.field, len(dst.bases[c]), 0)
            for col in cols:
                acc = acc.hstack(col)
            mats[c] = acc
        return ModuleMap(src.module, dst.module, mats, check=False)

    # -- unit and counit of nu -| nu^- -------------------------------------

    def _hom_into_nu(self, c, x, nuF: NuApplied, vec: Matrix) -> Matrix:
        """Component at x of the map coef_left[c] -> nu(F) sending xi to the
        class of xi (x) v, for a fixed v in F(c)."""
        f = self.cat.field
        F = nuF.source
        t = nuF.data[x]
        T = self.op_to_c(x, c)
        # columns: dual basis (opposite-side) of D(C(x,c)); convert to the
        # direct-side dual basis, then embed xi (x) v into the ambient block c
        conv = T.inverse().transpose() if T.rows else Matrix.zeros(f, 0, 0)
        amb = Matrix.zeros(f, t.ambient, conv.cols)
        for j in range(conv.cols):
            for i in range(conv.rows):
                coef = conv.data[i][j]
                if coef != f.zero():
                    for r in range(F.dims[c]):
                        row = t.offsets[c] + i * F.dims[c] + r
                        amb.data[row][j] = f.add(amb.data[row][j], f.mul(coef, vec.data[r][0]))
        return t.proj @ amb

    def lambda_unit(self, f_mod: Module, nuF: NuApplied | None = None,
                    nm: NuMinusApplied | None = None) -> ModuleMap:
        """The unit F -> nu^- nu F."""
        cat = self.cat
        f = cat.field
        nuF = nuF or self.nu(f_mod)
        nm = nm or self.nu_minus(nuF.module)
        mats = {}
        for c in cat.objects:
            cols = []
            for j in range(f_mod.dims[c]):
                vec = Matrix.zeros(f, f_mod.dims[c], 1)
                vec.data[j][0] = f.one()
                comp_mats = {x: self._hom_into_nu(c, x, nuF, vec) for x in cat.objects}
                phi = ModuleMap(self.coef_left(c), nuF.module, comp_mats, check=False)
                cols.append(hom_coords(nm.bases[c], phi))
            acc = Matrix.zeros(f, len(nm.bases[c]), 0)
            for col in cols:
                acc = acc.hstack(col)
            mats[c] = acc
        return ModuleMap(f_mod, nm.module, mats, check=False)

    def sigma_counit(self, f_mod: Module, nm: NuMinusApplied | None = None,
                     nu_nm: NuApplied | None = None) -> ModuleMap:
        """The counit nu nu^- F -> F."""
        cat = self.cat
        f = cat.field
        nm = nm or self.nu_minus(f_mod)
        nu_nm = nu_nm or self.nu(nm.module)
        mats = {}
        for c in cat.objects:
            t = nu_nm.data[c]
            V = Matrix.zeros(f, f_mod.dims[c], t.ambient)
            for y in cat.objects:
                Tt = self.op_to_c(c, y).transpose()
                ny = len(nm.bases[y])
                dcy = self.cat.hom_dim(c, y)
                for i in range(dcy):
                    # dual-basis element i of D(C(c,y)) in opposite-side coords
                    xi_op = Matrix(f, [[Tt.data[k][i]] for k in range(Tt.rows)], Tt.rows, 1)
                    for m_idx, psi in enumerate(nm.bases[y]):
                        val = psi.mats[c] @ xi_op
                        colpos = t.offsets[y] + i * ny + m_idx
                        for r in range(f_mod.dims[c]):
                            V.data[r][colpos] = val.data[r][0]
            mats[c] = V @ t.section()
        return ModuleMap(nu_nm.module, f_mod, mats, check=False)

    def adjunct(self, psi: ModuleMap, G: Module, nuG: NuApplied,
                nmF: NuMinusApplied) -> ModuleMap:
        """Hom(nu G, F) -> Hom(G, nu^- F) along the adjunction."""
        nm_psi = self.nu_minus_map(self.nu_minus(nuG.module), nmF, psi)
        lam = self.lambda_unit(G, nuG, self.nu_minus(nuG.module))
        return lam.then(nm_psi)

    def coadjunct(self, chi: ModuleMap, G: Module, nuG: NuApplied,
                  nmF: NuMinusApplied, f_mod: Module) -> ModuleMap:
        """Hom(G, nu^- F) -> Hom(nu G, F), the inverse direction."""
        nu_chi = self.nu_map(nuG, self.nu(nmF.module), chi)
        sig = self.sigma_counit(f_mod, nmF, self.nu(nmF.module))
        return nu_chi.then(sig)

    def iso_nu_ishriek(self, parts: dict, shriek: Cover | None = None,
                       nuP: NuApplied | None = None) -> ModuleMap:
        """The canonical map nu(i_!(parts)) -> i_*(parts); an isomorphism.

        A dual path xi tensored with a generator translate p is sent to the
        functional q -> xi(p after q) in the matching coinduced block.
        """
        cat = self.cat
        f = cat.field
        shriek = shriek or self.i_shriek(parts)
        nuP = nuP or self.nu(shriek.module)
        coind = self.i_star_coinduced(parts)
        summands = [c for c, _ in shriek.summands]
        mats = {}
        for x in cat.objects:
            t = nuP.data[x]
            V = Matrix.zeros(f, coind.dims[x], t.ambient)
            offs = []
            off = 0
            for c in summands:
                offs.append(off)
                off += self.coef_left(c).dims[x]
            for y in cat.objects:
                xy = cat.hom_basis_paths(x, y)
                flat = []  # (summand index, generator path) coordinates of i_! at y
                for k, c in enumerate(summands):
                    for p in cat.hom_basis_paths(c, y):
                        flat.append((k, p))
                for wi, w in enumerate(xy):
                    for si, (k, p) in enumerate(flat):
                        c = summands[k]
                        col = t.offsets[y] + wi * len(flat) + si
                        # functional on Hom(x, c) in direct-side dual coords
                        direct = []
                        for q in cat.hom_basis_paths(x, c):
                            red = cat.reduce_word(x, q + p)
                            direct.append(red.get(w, f.zero()))
                        if not direct:
                            continue
                        vcol = Matrix(f, [[e] for e in direct], len(direct), 1)
                        opcoords = self.op_to_c(x, c).transpose() @ vcol
                        for r in range(opcoords.rows):
                            V.data[offs[k] + r][col] = f.add(
                                V.data[offs[k] + r][col], opcoords.data[r][0]
                            )
            mats[x] = V @ t.section()
        return ModuleMap(nuP.module, coind, mats, check=False)

    # -- derived functors --------------------------------------------------

    def left_derived_nu_dims(self, f_mod: Module, i: int) -> dict:
        """dim L_i nu (F)(c) per object, coefficient route with fallback."""
        out = {}
        res_f = None
        for c in self.cat.objects:
            v = _tor_from_resolution_of_right(self.res_right(c), f_mod, i)
            if not v.conclusive:
                if res_f is None:
                    res_f = projective_resolution(f_mod, self.cutoff)
                v = _tor_from_resolution_of_left(self.coef_right(c), res_f, i)
            out[c] = v
        return out

    def right_derived_nu_minus_dims(self, f_mod: Module, i: int) -> dict:
        """dim R^i nu^- (F)(c) per object: Ext from a resolution of the
        coefficient injective, falling back to the coresolution side."""
        out = {}
        res_dual = None
        for c in self.cat.objects:
            v = _ext_from_resolution(self.res_left(c), f_mod, i)
            if not v.conclusive:
                if res_dual is None:
                    res_dual = projective_resolution(dual(f_mod), self.cutoff)
                v = _ext_from_resolution(res_dual, dual(self.coef_left(c)), i)
            out[c] = v
        return out

    def left_derived_nu(self, f_mod: Module, i: int) -> Module:
        """L_i nu (F) as a representation: homology of nu of a resolution."""
        if i < 1:
            raise ModuleError("left derived functor needs degree >= 1")
        res = projective_resolution(f_mod, self.cutoff)
        n = res.length()
        if not res.completed and i > n - 1:
            raise InconclusiveError(f"resolution of F truncated at {n} < degree {i}+1")
        if i > n:
            return zero_module(self.cat)
        nus = [self.nu(res.stage_module(j)) for j in range(min(i + 1, n) + 1)]
        d_out = self.nu_map(nus[i], nus[i - 1], res.diff(i))
        if i + 1 <= n:
            d_in = self.nu_map(nus[i + 1], nus[i], res.diff(i + 1))
        else:
            d_in = ModuleMap(zero_module(self.cat), nus[i].module, {}, check=False)
        return homology_of_modules(d_out, d_in)[0]

    def injective_coresolution(self, f_mod: Module) -> tuple:
        """Dualized projective resolution of D(F): modules I^0, I^1, ... and
        maps F -> I^0, I^j -> I^{j+1}."""
        res = projective_resolution(dual(f_mod), self.cutoff)
        stages = [dual(res.stage_module(j)) for j in range(res.length() + 1)]
        aug = dual_map(res.stages[0].epi)      # F -> I^0 (via F = D(D(F)))
        diffs = [dual_map(res.diff(j)) for j in range(1, res.length() + 1)]
        return stages, aug, diffs, res.completed

    def right_derived_nu_minus(self, f_mod: Module, i: int) -> Module:
        """R^i nu^- (F) as a representation, via an injective coresolution."""
        if i < 1:
            raise ModuleError("right derived functor needs degree >= 1")
        stages, aug, diffs, completed = self.injective_coresolution(f_mod)
        n = len(stages) - 1
        if not completed and i > n - 1:
            raise InconclusiveError(f"coresolution of F truncated at {n} < degree {i}+1")
        if i > n:
            return zero_module(self.cat)
        nms = [self.nu_minus(stages[j]) for j in range(min(i + 1, n) + 1)]
        d_in = self.nu_minus_map(nms[i - 1], nms[i], diffs[i - 1])
        if i + 1 <= n:
            d_out = self.nu_minus_map(nms[i], nms[i + 1], diffs[i])
        else:
            d_out = ModuleMap(nms[i].module, zero_module(self.cat), {}, check=False)
        return homology_of_modules(d_out, d_in)[0]

    # -- Gorenstein dimension of P ----------------------------------------

    def gorenstein_dimension(self) -> GorensteinDimension:
        """sup_c pdim of the coefficient modules, from both sides."""
        if self._gdim is None:
            left = {c: pdim(self.coef_left(c), self.cutoff) for c in self.cat.objects}
            right = {c: pdim(self.coef_right(c), self.cutoff) for c in self.cat.objects}
            if any(v is None for v in left.values()) or any(v is None for v in right.values()):
                self._gdim = GorensteinDimension(None, "not-Iwanaga-Gorenstein-at-cutoff",
                                                left, right, self.cutoff)
            else:
                s1 = max(left.values(), default=0)
                s2 = max(right.values(), default=0)
                if s1 != s2:
                    raise ModuleError(
                        f"two-sided coefficient dimensions disagree: {s1} vs {s2}"
                    )
                self._gdim = GorensteinDimension(s1, "finite", left, right, self.cutoff)
        return self._gdim


def gorenstein_dimension_of_P(cat: BoundQuiverCategory, cutoff: int = 16) -> GorensteinDimension:
    return NakayamaEngine(cat, cutoff).gorenstein_dimension()
