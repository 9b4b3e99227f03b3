"""Modules over a bound quiver category.

A Module is a k-linear functor C -> k-Mod: a dimension per object and a
matrix per arrow.  Right C-modules are Modules over C.opposite(), which
keeps one code path for both variances.  Everything downstream (duality,
tensor, Hom, resolutions, Tor, Ext) reduces to exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import BoundQuiverCategory
from .linalg import (
    LinAlgError,
    Matrix,
    ShapeError,
    Subquotient,
    direct_sum_many,
    kronecker_product,
)


class ModuleError(Exception):
    pass


class InconclusiveError(ModuleError):
    """A definite answer would need a resolution beyond the cutoff."""


@dataclass(frozen=True)
class DerivedValue:
    """Result of a derived-functor dimension count.

    dim is None exactly when the computation was inconclusive at the cutoff;
    a conclusive value is exact.
    """

    dim: int | None
    conclusive: bool
    note: str = ""

    def expect(self) -> int:
        if not self.conclusive:
            raise InconclusiveError(self.note or "inconclusive at cutoff")
        return self.dim


class Module:
    __slots__ = ("cat", "dims", "mats")

    def __init__(self, cat: BoundQuiverCategory, dims: dict, mats: dict, check: bool = True):
        self.cat = cat
        self.dims = {c: int(dims.get(c, 0)) for c in cat.objects}
        self.mats = {}
        for name, (s, t) in cat.arrow_map.items():
            m = mats.get(name)
            if m is None:
                m = Matrix.zeros(cat.field, self.dims[t], self.dims[s])
            self.mats[name] = m
        if check:
            self.validate()

    def validate(self):
        f = self.cat.field
        for name, (s, t) in self.cat.arrow_map.items():
            m = self.mats[name]
            if (m.rows, m.cols) != (self.dims[t], self.dims[s]):
                raise ShapeError(f"arrow {name}: matrix shape {m.rows}x{m.cols} "
                                 f"vs dims {self.dims[t]}x{self.dims[s]}")
            if m.field != f:
                raise ModuleError(f"arrow {name}: wrong field")
        for rel in self.cat.relations:
            src = self.cat.arrow_map[rel.terms[0][1][0]][0]
            tgt = self.cat.arrow_map[rel.terms[0][1][-1]][1]
            acc = Matrix.zeros(f, self.dims[tgt], self.dims[src])
            for coef, path in rel.terms:
                acc = acc + self.act_path(src, path).scale(coef)
            if not acc.is_zero():
                raise ModuleError(f"relation {rel.terms} violated")

    def act_path(self, c, path) -> Matrix:
        m = Matrix.identity(self.cat.field, self.dims[c])
        for a in path:
            m = self.mats[a] @ m
        return m

    def act_elem(self, c, d, elem: dict) -> Matrix:
        f = self.cat.field
        out = Matrix.zeros(f, self.dims[d], self.dims[c])
        for path, coef in elem.items():
            out = out + self.act_path(c, path).scale(coef)
        return out

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def dim_vector(self) -> dict:
        return dict(self.dims)

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.cat == other.cat
            and self.dims == other.dims
            and self.mats == other.mats
        )

    def __hash__(self):
        return hash((tuple(sorted(self.dims.items())),))

    def __repr__(self):
        return f"Module({self.dims})"


class ModuleMap:
    __slots__ = ("src", "dst", "mats")

    def __init__(self, src: Module, dst: Module, mats: dict, check: bool = True):
        if src.cat != dst.cat:
            raise ModuleError("module map across different categories")
        self.src = src
        self.dst = dst
        self.mats = {}
        for c in src.cat.objects:
            m = mats.get(c)
            if m is None:
                m = Matrix.zeros(src.cat.field, dst.dims[c], src.dims[c])
            self.mats[c] = m
        if check:
            self.validate()

    def validate(self):
        for c in self.src.cat.objects:
            m = self.mats[c]
            if (m.rows, m.cols) != (self.dst.dims[c], self.src.dims[c]):
                raise ShapeError(f"component at {c}: shape mismatch")
        for name, (s, t) in self.src.cat.arrow_map.items():
            left = self.mats[t] @ self.src.mats[name]
            right = self.dst.mats[name] @ self.mats[s]
            if left != right:
                raise ModuleError(f"naturality fails over arrow {name}")

    @staticmethod
    def identity(m: Module) -> "ModuleMap":
        return ModuleMap(m, m, {c: Matrix.identity(m.cat.field, m.dims[c]) for c in m.cat.objects}, check=False)

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """self followed by other."""
        if self.dst is not other.src and self.dst != other.src:
            raise ModuleError("composition endpoint mismatch")
        return ModuleMap(self.src, other.dst,
                         {c: other.mats[c] @ self.mats[c] for c in self.src.cat.objects},
                         check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.src, self.dst,
                         {c: self.mats[c] + other.mats[c] for c in self.src.cat.objects},
                         check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.src, self.dst,
                         {c: self.mats[c] - other.mats[c] for c in self.src.cat.objects},
                         check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def is_iso(self) -> bool:
        return all(
            m.rows == m.cols and m.rank() == m.rows for m in self.mats.values()
        )

    def is_injective(self) -> bool:
        return all(m.rank() == m.cols for m in self.mats.values())

    def is_surjective(self) -> bool:
        return all(m.rank() == m.rows for m in self.mats.values())

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMap)
            and self.src == other.src
            and self.dst == other.dst
            and self.mats == other.mats
        )

    def __repr__(self):
        return f"ModuleMap({self.src.dims} -> {self.dst.dims})"


# -- basic constructions --------------------------------------------------


def zero_module(cat: BoundQuiverCategory) -> Module:
    return Module(cat, {}, {}, check=False)


def representable(cat: BoundQuiverCategory, c) -> Module:
    """The covariant representable at c: value Hom(c, x) at x."""
    if c not in cat.objects:
        raise ModuleError(f"unknown object {c!r}")
    dims = {x: cat.hom_dim(c, x) for x in cat.objects}
    f = cat.field
    mats = {}
    for name, (s, t) in cat.arrow_map.items():
        src_paths = cat.hom_basis_paths(c, s)
        cols = []
        for p in src_paths:
            red = cat.reduce_word(c, p + (name,))
            cols.append(red)
        idx = {p: i for i, p in enumerate(cat.hom_basis_paths(c, t))}
        data = [[f.zero()] * len(src_paths) for _ in idx] if idx else []
        for j, red in enumerate(cols):
            for p, coef in red.items():
                data[idx[p]][j] = coef
        mats[name] = Matrix(f, data, len(idx), len(src_paths))
    return Module(cat, dims, mats, check=False)


def simple(cat: BoundQuiverCategory, c) -> Module:
    if c not in cat.objects:
        raise ModuleError(f"unknown object {c!r}")
    return Module(cat, {c: 1}, {}, check=False)


def dual(m: Module) -> Module:
    """k-linear dual, a module over the opposite category."""
    op = m.cat.opposite()
    return Module(op, dict(m.dims), {a: mat.transpose() for a, mat in m.mats.items()}, check=False)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.dst), dual(f.src),
                     {c: f.mats[c].transpose() for c in f.src.cat.objects},
                     check=False)


def direct_sum_modules(parts: list) -> tuple:
    """Direct sum with the canonical inclusions and projections."""
    if not parts:
        raise ModuleError("direct sum needs an ambient category; pass at least a zero module")
    cat = parts[0].cat
    f = cat.field
    dims = {c: sum(p.dims[c] for p in parts) for c in cat.objects}
    mats = {}
    for name in cat.arrow_map:
        mats[name] = direct_sum_many(f, [p.mats[name] for p in parts])
    total = Module(cat, dims, mats, check=False)
    incls, projs = [], []
    for i, p in enumerate(parts):
        inc, prj = {}, {}
        for c in cat.objects:
            before = sum(q.dims[c] for q in parts[:i])
            rows = []
            z, o = f.zero(), f.one()
            for r in range(dims[c]):
                rows.append([o if r == before + j else z for j in range(p.dims[c])])
            inc[c] = Matrix(f, rows, dims[c], p.dims[c])
            prj[c] = inc[c].transpose()
        incls.append(ModuleMap(p, total, inc, check=False))
        projs.append(ModuleMap(total, p, prj, check=False))
    return total, incls, projs


def kernel(f: ModuleMap) -> tuple:
    """Kernel module with its inclusion."""
    cat = f.src.cat
    bases = {c: f.mats[c].kernel() for c in cat.objects}
    dims = {c: bases[c].cols for c in cat.objects}
    mats = {}
    for name, (s, t) in cat.arrow_map.items():
        moved = f.src.mats[name] @ bases[s]
        coords = bases[t].solve(moved)
        if coords is None:
            raise LinAlgError("kernel is not arrow-stable")
        mats[name] = coords
    K = Module(cat, dims, mats, check=False)
    incl = ModuleMap(K, f.src, bases, check=False)
    return K, incl


def cokernel(f: ModuleMap) -> tuple:
    """Cokernel module with its projection."""
    cat = f.src.cat
    projs = {c: f.mats[c].cokernel_projection() for c in cat.objects}
    sections = {c: projs[c].right_inverse() for c in cat.objects}
    dims = {c: projs[c].rows for c in cat.objects}
    mats = {}
    for name, (s, t) in cat.arrow_map.items():
        mats[name] = projs[t] @ f.dst.mats[name] @ sections[s]
    Q = Module(cat, dims, mats, check=False)
    proj = ModuleMap(f.dst, Q, projs, check=False)
    return Q, proj


def image(f: ModuleMap) -> tuple:
    """Image module with its inclusion into the target."""
    cat = f.src.cat
    bases = {c: f.mats[c].column_space_basis() for c in cat.objects}
    dims = {c: bases[c].cols for c in cat.objects}
    mats = {}
    for name, (s, t) in cat.arrow_map.items():
        coords = bases[t].solve(f.dst.mats[name] @ bases[s])
        if coords is None:
            raise LinAlgError("image is not arrow-stable")
        mats[name] = coords
    I = Module(cat, dims, mats, check=False)
    incl = ModuleMap(I, f.dst, bases, check=False)
    return I, incl


# -- Hom ------------------------------------------------------------------


def map_vec(f: ModuleMap) -> Matrix:
    """Flatten a module map to a coordinate column (object order, row-major)."""
    entries = []
    for c in f.src.cat.objects:
        entries.extend(f.mats[c].entries_flat())
    return Matrix(f.src.cat.field, [[e] for e in entries], len(entries), 1)


def hom_basis(m: Module, n: Module) -> list:
    """Canonical basis of the space of module maps m -> n."""
    cat = m.cat
    f = cat.field
    offsets = {}
    off = 0
    for c in cat.objects:
        offsets[c] = off
        off += n.dims[c] * m.dims[c]
    unknowns = off
    rows = []
    z = f.zero()
    for name, (s, t) in cat.arrow_map.items():
        ma, na = m.mats[name], n.mats[name]
        for i in range(n.dims[t]):
            for j in range(m.dims[s]):
                row = [z] * unknowns
                for k in range(m.dims[t]):
                    row[offsets[t] + i * m.dims[t] + k] = f.add(
                        row[offsets[t] + i * m.dims[t] + k], ma.data[k][j]
                    )
                for k in range(n.dims[s]):
                    row[offsets[s] + k * m.dims[s] + j] = f.sub(
                        row[offsets[s] + k * m.dims[s] + j], na.data[i][k]
                    )
                rows.append(row)
    system = Matrix(f, rows, len(rows), unknowns)
    ker = system.kernel()
    maps = []
    for col in range(ker.cols):
        mats = {}
        for c in cat.objects:
            data = []
            for i in range(n.dims[c]):
                data.append([
                    ker.data[offsets[c] + i * m.dims[c] + j][col]
                    for j in range(m.dims[c])
                ])
            mats[c] = Matrix(f, data, n.dims[c], m.dims[c])
        maps.append(ModuleMap(m, n, mats, check=False))
    return maps


def hom_coords(basis: list, f: ModuleMap) -> Matrix:
    """Coordinates of a map in a given hom basis."""
    if not basis:
        if not f.is_zero():
            raise ModuleError("nonzero map in zero hom space")
        return Matrix.zeros(f.src.cat.field, 0, 1)
    cols = map_vec(basis[0])
    for b in basis[1:]:
        cols = cols.hstack(map_vec(b))
    sol = cols.solve(map_vec(f))
    if sol is None:
        raise ModuleError("map outside the span of the hom basis")
    return sol


# -- tensor over the category --------------------------------------------


class TensorResult:
    """M (x)_C F as an explicit quotient of the direct sum of pointwise tensors.

    Ambient coordinates: blocks per object y in category order, index
    i * dim F(y) + j inside a block for basis tensors m_i (x) f_j.
    """

    __slots__ = ("field", "offsets", "block_dims", "ambient", "proj", "_section")

    def __init__(self, field, offsets, block_dims, ambient, proj):
        self.field = field
        self.offsets = offsets
        self.block_dims = block_dims
        self.ambient = ambient
        self.proj = proj
        self._section = None

    @property
    def dim(self) -> int:
        return self.proj.rows

    def section(self) -> Matrix:
        if self._section is None:
            self._section = self.proj.right_inverse()
        return self._section

    def ambient_unit(self, y, i, j) -> int:
        mdim, fdim = self.block_dims[y]
        return self.offsets[y] + i * fdim + j

    def induced(self, target: "TensorResult", ambient_map: Matrix) -> Matrix:
        return target.proj @ (ambient_map @ self.section())


def tensor_over_cat(m: Module, f_mod: Module) -> TensorResult:
    """Tensor of a right module (module over the opposite) with a left module."""
    cat = f_mod.cat
    if m.cat != cat.opposite():
        raise ModuleError("tensor needs a right module (over the opposite category)")
    f = cat.field
    offsets, block_dims = {}, {}
    off = 0
    for y in cat.objects:
        offsets[y] = off
        block_dims[y] = (m.dims[y], f_mod.dims[y])
        off += m.dims[y] * f_mod.dims[y]
    ambient = off
    cols = []
    z = f.zero()
    for name, (s, t) in cat.arrow_map.items():
        # arrow a: s -> t in C; m is contravariant, so m.mats[a]: M(t) -> M(s)
        ma, fa = m.mats[name], f_mod.mats[name]
        for i in range(m.dims[t]):
            for j in range(f_mod.dims[s]):
                col = [z] * ambient
                for k in range(m.dims[s]):
                    idx = offsets[s] + k * f_mod.dims[s] + j
                    col[idx] = f.add(col[idx], ma.data[k][i])
                for l in range(f_mod.dims[t]):
                    idx = offsets[t] + i * f_mod.dims[t] + l
                    col[idx] = f.sub(col[idx], fa.data[l][j])
                cols.append(col)
    rel = Matrix(f, [[c[r] for c in cols] for r in range(ambient)], ambient, len(cols))
    proj = rel.cokernel_projection()
    return TensorResult(f, offsets, block_dims, ambient, proj)


def tensor_ambient_map(src: TensorResult, dst: TensorResult, cat, u_mats: dict, v_mats: dict) -> Matrix:
    """Block-diagonal ambient matrix of u (x) v between two tensor presentations."""
    blocks = [kronecker_product(u_mats[y], v_mats[y]) for y in cat.objects]
    return direct_sum_many(src.field, blocks)


def tensor_induced(src: TensorResult, dst: TensorResult, cat, u: ModuleMap | None, v: ModuleMap | None) -> Matrix:
    u_mats = {y: u.mats[y] for y in cat.objects} if u is not None else None
    v_mats = {y: v.mats[y] for y in cat.objects} if v is not None else None
    if u_mats is None:
        u_mats = {y: Matrix.identity(src.field, src.block_dims[y][0]) for y in cat.objects}
    if v_mats is None:
        v_mats = {y: Matrix.identity(src.field, src.block_dims[y][1]) for y in cat.objects}
    amb = tensor_ambient_map(src, dst, cat, u_mats, v_mats)
    return src.induced(dst, amb)


# -- projective covers and resolutions ------------------------------------


def radical_inclusion_images(m: Module, c) -> Matrix:
    """Columns spanning the radical (sum of incoming arrow images) at c."""
    f = m.cat.field
    acc = Matrix.zeros(f, m.dims[c], 0)
    for name, (s, t) in m.cat.arrow_map.items():
        if t == c:
            acc = acc.hstack(m.mats[name])
    return acc


@dataclass
class Cover:
    module: Module          # the projective cover P
    epi: ModuleMap          # P -> M
    summands: list          # of (object, generator column in M(object))


def free_on_generators(m: Module, summands: list) -> Cover:
    """Direct sum of representables at the summand objects, with the action
    map sending each generator of C(c,-) to its chosen vector in M(c)."""
    cat = m.cat
    f = cat.field
    parts = [representable(cat, c) for c, _ in summands]
    if parts:
        total, _, _ = direct_sum_modules(parts)
    else:
        total = zero_module(cat)
    epi_mats = {}
    for x in cat.objects:
        acc = Matrix.zeros(f, m.dims[x], 0)
        for c, vec in summands:
            for p in cat.hom_basis_paths(c, x):
                acc = acc.hstack(m.act_path(c, p) @ vec)
        epi_mats[x] = acc
    return Cover(total, ModuleMap(total, m, epi_mats, check=False), summands)


def projective_cover(m: Module, padded: bool = False) -> Cover:
    cat = m.cat
    f = cat.field
    summands = []
    for c in cat.objects:
        rad = radical_inclusion_images(m, c)
        top_proj = rad.cokernel_projection()
        if top_proj.rows:
            gens = top_proj.right_inverse()
            for j in range(gens.cols):
                summands.append((c, gens.col(j)))
    if padded and cat.objects:
        # extra non-minimal summand mapping to zero
        summands.append((cat.objects[0], Matrix.zeros(f, m.dims[cat.objects[0]], 1)))
    cov = free_on_generators(m, summands)
    if not cov.epi.is_surjective():
        raise ModuleError("projective cover failed to surject (radical not nilpotent?)")
    return cov


@dataclass
class Resolution:
    """Projective resolution ... -> P_1 -> P_0 -> M (possibly truncated)."""

    module: Module
    stages: list            # of Cover; stages[i].module = P_i
    diffs: list             # diffs[i]: P_{i+1} -> P_i, for i >= 0
    completed: bool
    cutoff: int

    def length(self) -> int:
        return len(self.stages) - 1

    def stage_module(self, i: int) -> Module:
        if i < len(self.stages):
            return self.stages[i].module
        return zero_module(self.module.cat)

    def diff(self, i: int) -> ModuleMap:
        """The map P_i -> P_{i-1} (zero beyond the computed range)."""
        if 1 <= i <= len(self.diffs):
            return self.diffs[i - 1]
        return ModuleMap(self.stage_module(i), self.stage_module(i - 1), {}, check=False)


def projective_resolution(m: Module, cutoff: int, padded: bool = False) -> Resolution:
    if cutoff < 0:
        raise ModuleError("cutoff must be nonnegative")
    cover0 = projective_cover(m, padded=padded)
    stages = [cover0]
    diffs = []
    current_epi = cover0.epi
    completed = m.is_zero() and cover0.module.is_zero()
    for _ in range(cutoff):
        k, incl = kernel(current_epi)
        if k.is_zero():
            completed = True
            break
        cov = projective_cover(k, padded=padded)
        stages.append(cov)
        diffs.append(cov.epi.then(incl))
        current_epi = cov.epi
    else:
        k, _ = kernel(current_epi)
        if k.is_zero():
            completed = True
    return Resolution(m, stages, diffs, completed, cutoff)


def pdim(m: Module, cutoff: int) -> int | None:
    """Projective dimension; None means not settled within the cutoff."""
    res = projective_resolution(m, cutoff)
    if not res.completed:
        return None
    n = res.length()
    while n > 0 and res.stages[n].module.is_zero():
        n -= 1
    return n


# -- Tor and Ext ----------------------------------------------------------


def _tor_from_resolution_of_right(res: Resolution, f_mod: Module, i: int) -> DerivedValue:
    cat = f_mod.cat
    n = res.length()
    if not res.completed and i > n - 1:
        return DerivedValue(None, False, "resolution truncated below requested degree")
    if i > n:
        return DerivedValue(0, True)
    tens = [tensor_over_cat(res.stage_module(j), f_mod) for j in range(min(i + 1, n) + 1)]

    def t_map(j):
        # differential T_j -> T_{j-1}
        return tensor_induced(tens[j], tens[j - 1], cat, res.diff(j), None)

    if i == 0:
        d_out = Matrix.zeros(cat.field, 0, tens[0].dim)
    else:
        d_out = t_map(i)
    if i + 1 > n:
        d_in = Matrix.zeros(cat.field, tens[i].dim, 0)
    else:
        d_in = t_map(i + 1)
    h = Subquotient.homology(d_out, d_in)
    return DerivedValue(h.dim, True)


def _tor_from_resolution_of_left(m_right: Module, res_f: Resolution, i: int) -> DerivedValue:
    n = res_f.length()
    if not res_f.completed and i > n - 1:
        return DerivedValue(None, False, "resolution truncated below requested degree")
    if i > n:
        return DerivedValue(0, True)
    cat = res_f.module.cat
    tens = [tensor_over_cat(m_right, res_f.stage_module(j)) for j in range(min(i + 1, n) + 1)]

    def t_map(j):
        return tensor_induced(tens[j], tens[j - 1], cat, None, res_f.diff(j))

    d_out = Matrix.zeros(cat.field, 0, tens[0].dim) if i == 0 else t_map(i)
    if i + 1 > n:
        d_in = Matrix.zeros(cat.field, tens[i].dim, 0)
    else:
        d_in = t_map(i + 1)
    h = Subquotient.homology(d_out, d_in)
    return DerivedValue(h.dim, True)


def tor_dim(m_right: Module, f_mod: Module, i: int, cutoff: int,
            resolution: Resolution | None = None) -> DerivedValue:
    """dim Tor_i(M, F) for a right module M and left module F.

    Resolves the right-hand side first; falls back to resolving F when the
    first route is truncated below the requested degree.
    """
    if i < 0:
        raise ModuleError("negative homological degree")
    res = resolution or projective_resolution(m_right, cutoff)
    out = _tor_from_resolution_of_right(res, f_mod, i)
    if out.conclusive or resolution is not None:
        return out
    out2 = _tor_from_resolution_of_left(m_right, projective_resolution(f_mod, cutoff), i)
    if out2.conclusive:
        return out2
    return DerivedValue(None, False, "both tensor-side resolutions truncated")


def _ext_from_resolution(res: Resolution, n_mod: Module, i: int) -> DerivedValue:
    n = res.length()
    if not res.completed and i > n - 1:
        return DerivedValue(None, False, "resolution truncated below requested degree")
    if i > n:
        return DerivedValue(0, True)
    cat = n_mod.cat
    f = cat.field
    bases = [hom_basis(res.stage_module(j), n_mod) for j in range(min(i + 1, n) + 1)]

    def delta(j):
        # Hom(P_j, N) -> Hom(P_{j+1}, N), phi -> phi after d_{j+1}
        src_b, dst_b = bases[j], bases[j + 1]
        d = res.diff(j + 1)
        cols = []
        for phi in src_b:
            cols.append(hom_coords(dst_b, d.then(phi)))
        out = Matrix.zeros(f, len(dst_b), 0)
        for c in cols:
            out = out.hstack(c)
        return out

    if i + 1 <= n:
        d_out = delta(i)
    else:
        # completed resolution: the next hom space is zero
        d_out = Matrix.zeros(f, 0, len(bases[i]))
    d_in = delta(i - 1) if i >= 1 else Matrix.zeros(f, len(bases[0]), 0)
    h = Subquotient.homology(d_out, d_in)
    return DerivedValue(h.dim, True)


def ext_dim(m: Module, n_mod: Module, i: int, cutoff: int,
            resolution: Resolution | None = None) -> DerivedValue:
    """dim Ext^i(M, N); falls back to the dual-side computation when needed."""
    if i < 0:
        raise ModuleError("negative cohomological degree")
    res = resolution or projective_resolution(m, cutoff)
    out = _ext_from_resolution(res, n_mod, i)
    if out.conclusive or resolution is not None:
        return out
    res_dual = projective_resolution(dual(n_mod), cutoff)
    out2 = _ext_from_resolution(res_dual, dual(m), i)
    if out2.conclusive:
        return out2
    return DerivedValue(None, False, "both Ext routes truncated at cutoff")


def homology_of_modules(d_out: ModuleMap, d_in: ModuleMap) -> tuple:
    """Objectwise homology of a three-term complex of modules.

    Returns the homology Module together with the per-object subquotient
    presentations (for mapping into or out of the homology).
    """
    cat = d_out.src.cat
    mid = d_out.src
    if d_in.dst != mid:
        raise ModuleError("homology: differentials do not share the middle module")
    sq = {c: Subquotient.homology(d_out.mats[c], d_in.mats[c]) for c in cat.objects}
    dims = {c: sq[c].dim for c in cat.objects}
    mats = {}
    for name, (s, t) in cat.arrow_map.items():
        mats[name] = sq[s].induced_map(sq[t], mid.mats[name])
    return Module(cat, dims, mats, check=False), sq


def chain_lift(res_src: Resolution, res_dst: Resolution, w: ModuleMap, upto: int) -> list:
    """Chain maps lifting w between resolutions, degrees 0..upto."""
    lifts = []
    prev = None
    for j in range(upto + 1):
        P = res_src.stage_module(j)
        Q = res_dst.stage_module(j)
        basis = hom_basis(P, Q)
        # constraint: eps_dst . f_0 = w . eps_src, or d'_j . f_j = f_{j-1} . d_j
        if j == 0:
            target = res_src.stages[0].epi.then(w)
            post = res_dst.stages[0].epi
        else:
            target = res_src.diff(j).then(prev)
            post = res_dst.diff(j)
        # solve sum x_k (b_k . post) = target in map coordinates
        cols = None
        for b in basis:
            v = map_vec(b.then(post))
            cols = v if cols is None else cols.hstack(v)
        rhs = map_vec(target)
        if cols is None:
            cols = Matrix.zeros(P.cat.field, rhs.rows, 0)
        sol = cols.solve(rhs)
        if sol is None:
            raise ModuleError("chain lift does not exist (non-projective stage?)")
        f = P.cat.field
        mats = {c: Matrix.zeros(f, Q.dims[c], P.dims[c]) for c in P.cat.objects}
        lift = ModuleMap(P, Q, mats, check=False)
        for k, b in enumerate(basis):
            coef = sol.data[k][0]
            if coef != f.zero():
                lift = lift + ModuleMap(P, Q, {c: b.mats[c].scale(coef) for c in P.cat.objects}, check=False)
        lifts.append(lift)
        prev = lift
    return lifts
