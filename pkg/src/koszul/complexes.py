"""Bounded complexes and double complexes of graded modules.

Double complexes follow the convention that makes the unsigned total
differential square to zero: rows and columns are complexes and the mixed
composites anticommute (h.v + v.h = 0).  Data that arrives with commuting
squares is imported through `DoubleComplex.from_commuting`, which twists
the columns by alternating signs.

Direct-sum positions carry ordered block labels (opaque tuples); the
canonical form sorts blocks by label so that structurally equal
constructions compare bit-exactly.
"""

from __future__ import annotations

from .linalg import Matrix, Subspace, solve
from .modules import (GradedModule, GradedMorphism, direct_sum, zero_module,
                      zero_morphism)


def blocks_of(m: GradedModule):
    if m.blocks is not None:
        return tuple((k, b) for k, b in m.blocks if not b.is_zero())
    if m.is_zero():
        return ()
    return (((), m),)


class ComplexOfModules:
    """A bounded cochain complex; differentials raise the position by one."""

    def __init__(self, pres, window, modules, diffs, validate=True):
        self.pres = pres
        self.window = window
        self.modules = {n: m for n, m in modules.items() if not m.is_zero()}
        self.diffs = {n: d for n, d in diffs.items() if not d.is_zero()}
        if validate:
            self._validate()

    def module(self, n: int) -> GradedModule:
        m = self.modules.get(n)
        return m if m is not None else zero_module(self.pres, self.window)

    def diff(self, n: int) -> GradedMorphism:
        d = self.diffs.get(n)
        return d if d is not None else zero_morphism(self.module(n), self.module(n + 1))

    def positions(self):
        return sorted(self.modules)

    def support(self):
        pos = self.positions()
        return (pos[0], pos[-1]) if pos else (0, -1)

    def _validate(self):
        for n, d in self.diffs.items():
            if d.source.dims != self.module(n).dims or d.target.dims != self.module(n + 1).dims:
                raise ValueError(f"differential at {n} has wrong endpoints")
        for n in list(self.diffs):
            nxt = self.diffs.get(n + 1)
            if nxt is not None and not nxt.compose(self.diffs[n]).is_zero():
                raise ValueError(f"d^2 != 0 at position {n}")

    # -- functorial operations -------------------------------------------------

    def shift(self, k: int) -> "ComplexOfModules":
        """The k-th shift: position n holds the old position n+k, signs (-1)^k."""
        modules = {n - k: m for n, m in self.modules.items()}
        sign = -1 if k % 2 else 1
        diffs = {}
        for n, d in self.diffs.items():
            diffs[n - k] = d if sign == 1 else d.negate()
        return ComplexOfModules(self.pres, self.window, modules, diffs, validate=False)

    def twist(self) -> "ComplexOfModules":
        return ComplexOfModules(self.pres, self.window, dict(self.modules),
                                {n: d.negate() for n, d in self.diffs.items()},
                                validate=False)

    def twist_power(self, k: int) -> "ComplexOfModules":
        return self.twist() if k % 2 else self

    def grading_shift(self, s: int) -> "ComplexOfModules":
        modules = {n: m.shift(s) for n, m in self.modules.items()}
        diffs = {}
        for n, d in self.diffs.items():
            mats = {(i - s, x): mat for (i, x), mat in d.mats.items()}
            diffs[n] = GradedMorphism(modules.get(n, self.module(n).shift(s)),
                                      modules.get(n + 1, self.module(n + 1).shift(s)), mats)
        w = (self.window[0] - s, self.window[1] - s)
        return ComplexOfModules(self.pres, w, modules, diffs, validate=False)

    def same_content(self, other: "ComplexOfModules") -> bool:
        if set(self.modules) != set(other.modules):
            return False
        for n in self.modules:
            if not self.module(n).same_content(other.module(n)):
                return False
        for n in set(self.diffs) | set(other.diffs):
            if not self.diff(n).same_content(other.diff(n)):
                return False
        return True

    def block_keys(self):
        return {n: tuple(k for k, _ in blocks_of(m)) for n, m in self.modules.items()}

    def canonical_form(self) -> "ComplexOfModules":
        """Sort every position's blocks by label and conjugate the differentials."""
        perms = {}
        modules = {}
        for n, m in self.modules.items():
            blocks = list(blocks_of(m))
            order = sorted(range(len(blocks)), key=lambda t: repr(blocks[t][0]))
            perms[n] = (blocks, order)
            modules[n] = direct_sum(self.pres, m.window, [blocks[t] for t in order])
        diffs = {}
        for n, d in self.diffs.items():
            src = perms.get(n)
            tgt = perms.get(n + 1)
            mats = {}
            for (i, x) in set(d.mats):
                mat = d.piece(i, x)
                cols = _perm_ranges(src, i, x) if src else None
                rows = _perm_ranges(tgt, i, x) if tgt else None
                mats[(i, x)] = _permute_matrix(mat, rows, cols)
            diffs[n] = GradedMorphism(modules.get(n, self.module(n)),
                                      modules.get(n + 1, self.module(n + 1)), mats)
        return ComplexOfModules(self.pres, self.window, modules, diffs, validate=False)

    def __repr__(self):
        lo, hi = self.support()
        return f"Complex(positions {lo}..{hi})"


def _perm_ranges(perm_entry, i, x):
    """Index remap list for a piece when blocks get reordered."""
    blocks, order = perm_entry
    starts = []
    pos = 0
    for key, m in blocks:
        starts.append(pos)
        pos += m.dim(i, x)
    remap = []
    for t in order:
        d = blocks[t][1].dim(i, x)
        remap.extend(range(starts[t], starts[t] + d))
    return remap


def _permute_matrix(mat: Matrix, rows, cols) -> Matrix:
    rws = mat.rows
    if rows is not None:
        rws = [rws[r] for r in rows]
    if cols is not None:
        rws = [[row[c] for c in cols] for row in rws]
    return Matrix(mat.field, mat.nrows, mat.ncols, [list(r) for r in rws])


def single_module_complex(m: GradedModule, position: int = 0) -> ComplexOfModules:
    return ComplexOfModules(m.pres, m.window, {position: m}, {}, validate=False)


def relabel_positions(cx: ComplexOfModules, tag) -> ComplexOfModules:
    """Wrap every position in a single labeled block (tag, n)."""
    mods = {n: direct_sum(cx.pres, m.window, [(((tag, n),), m)])
            for n, m in cx.modules.items()}
    diffs = {n: GradedMorphism(mods[n], mods[n + 1], d.mats)
             for n, d in cx.diffs.items() if n + 1 in mods}
    return ComplexOfModules(cx.pres, cx.window, mods, diffs, validate=False)


def relabel_cells(dc: "DoubleComplex", tag) -> "DoubleComplex":
    """Wrap every cell in a single labeled block (tag, i, j)."""
    cells = {(i, j): direct_sum(dc.pres, m.window, [(((tag, i, j),), m)])
             for (i, j), m in dc.cells.items()}
    vert = {(i, j): GradedMorphism(cells[(i, j)], cells[(i, j + 1)], d.mats)
            for (i, j), d in dc.vert.items() if (i, j + 1) in cells}
    horiz = {(i, j): GradedMorphism(cells[(i, j)], cells[(i + 1, j)], d.mats)
             for (i, j), d in dc.horiz.items() if (i + 1, j) in cells}
    return DoubleComplex(dc.pres, dc.window, cells, vert, horiz, validate=False)


def relabel_double_map(f: "DoubleChainMap", src: "DoubleComplex",
                       tgt: "DoubleComplex") -> "DoubleChainMap":
    parts = {k: GradedMorphism(src.cell(*k), tgt.cell(*k), g.mats)
             for k, g in f.parts.items()}
    return DoubleChainMap(src, tgt, parts)


class ChainMap:
    """A morphism of complexes, stored positionwise."""

    def __init__(self, source: ComplexOfModules, target: ComplexOfModules, parts):
        self.source = source
        self.target = target
        self.parts = {n: f for n, f in parts.items() if not f.is_zero()}

    def part(self, n: int) -> GradedMorphism:
        f = self.parts.get(n)
        if f is not None:
            return f
        return zero_morphism(self.source.module(n), self.target.module(n))

    def validate(self):
        for n in set(self.source.modules) | set(self.target.modules):
            lhs = self.target.diff(n).compose(self.part(n))
            rhs = self.part(n + 1).compose(self.source.diff(n))
            if not lhs.same_content(rhs):
                raise ValueError(f"not a chain map at position {n}")
        return self


def mapping_cone(f: ChainMap) -> ComplexOfModules:
    """C_f with position n equal to X^{n+1} (+) Y^n, blocks concatenated."""
    x, y = f.source, f.target
    pres, window = x.pres, x.window
    positions = set(n - 1 for n in x.modules) | set(y.modules)
    modules = {}
    for n in positions:
        blocks = list(blocks_of(x.module(n + 1))) + list(blocks_of(y.module(n)))
        modules[n] = direct_sum(pres, window, blocks)
    diffs = {}
    for n in positions:
        if n + 1 not in positions:
            continue
        src = modules[n]
        tgt = modules[n + 1]
        dx = x.diff(n + 1)
        dy = y.diff(n)
        fn = f.part(n + 1)
        mats = {}
        for (i, v) in set(src.dims) | set(tgt.dims):
            a = -dx.piece(i, v)
            b = Matrix.zeros(pres.field, a.nrows, dy.piece(i, v).ncols)
            c = fn.piece(i, v)
            d = dy.piece(i, v)
            mats[(i, v)] = Matrix.block(pres.field, [[a, b], [c, d]])
        diffs[n] = GradedMorphism(src, tgt, mats)
    return ComplexOfModules(pres, window, modules, diffs, validate=False)


class DoubleComplex:
    """Bounded grid with row/column complexes and anticommuting squares."""

    def __init__(self, pres, window, cells, vert, horiz, validate=True):
        self.pres = pres
        self.window = window
        self.cells = {k: m for k, m in cells.items() if not m.is_zero()}
        self.vert = {k: d for k, d in vert.items() if not d.is_zero()}
        self.horiz = {k: d for k, d in horiz.items() if not d.is_zero()}
        if validate:
            self._validate()

    def cell(self, i, j) -> GradedModule:
        m = self.cells.get((i, j))
        return m if m is not None else zero_module(self.pres, self.window)

    def v(self, i, j) -> GradedMorphism:
        d = self.vert.get((i, j))
        return d if d is not None else zero_morphism(self.cell(i, j), self.cell(i, j + 1))

    def h(self, i, j) -> GradedMorphism:
        d = self.horiz.get((i, j))
        return d if d is not None else zero_morphism(self.cell(i, j), self.cell(i + 1, j))

    def _validate(self):
        for (i, j) in set(self.vert) | set(self.horiz) | set(self.cells):
            if not self.v(i, j + 1).compose(self.v(i, j)).is_zero():
                raise ValueError(f"column {i} not a complex at {j}")
            if not self.h(i + 1, j).compose(self.h(i, j)).is_zero():
                raise ValueError(f"row {j} not a complex at {i}")
            anti = self.v(i + 1, j).compose(self.h(i, j)).add(
                self.h(i, j + 1).compose(self.v(i, j)))
            if not anti.is_zero():
                raise ValueError(f"squares do not anticommute at ({i},{j})")

    @classmethod
    def from_commuting(cls, pres, window, cells, vert, horiz, validate=True):
        """Import a grid with commuting squares: column i gets sign (-1)^i."""
        new_vert = {(i, j): (d if i % 2 == 0 else d.negate())
                    for (i, j), d in vert.items()}
        return cls(pres, window, cells, new_vert, horiz, validate=validate)

    def row(self, j) -> ComplexOfModules:
        modules = {i: m for (i, jj), m in self.cells.items() if jj == j}
        diffs = {i: d for (i, jj), d in self.horiz.items() if jj == j}
        return ComplexOfModules(self.pres, self.window, modules, diffs, validate=False)

    def column(self, i) -> ComplexOfModules:
        modules = {j: m for (ii, j), m in self.cells.items() if ii == i}
        diffs = {j: d for (ii, j), d in self.vert.items() if ii == i}
        return ComplexOfModules(self.pres, self.window, modules, diffs, validate=False)

    def hshift(self) -> "DoubleComplex":
        cells = {(i - 1, j): m for (i, j), m in self.cells.items()}
        vert = {(i - 1, j): d.negate() for (i, j), d in self.vert.items()}
        horiz = {(i - 1, j): d.negate() for (i, j), d in self.horiz.items()}
        return DoubleComplex(self.pres, self.window, cells, vert, horiz, validate=False)

    def __repr__(self):
        return f"DoubleComplex({len(self.cells)} cells)"


class DoubleChainMap:
    def __init__(self, source: DoubleComplex, target: DoubleComplex, parts):
        self.source = source
        self.target = target
        self.parts = {k: f for k, f in parts.items() if not f.is_zero()}

    def part(self, i, j) -> GradedMorphism:
        f = self.parts.get((i, j))
        if f is not None:
            return f
        return zero_morphism(self.source.cell(i, j), self.target.cell(i, j))

    def validate(self):
        keys = set(self.source.cells) | set(self.target.cells) | set(self.parts)
        for (i, j) in keys:
            if not self.part(i, j + 1).compose(self.source.v(i, j)).same_content(
                    self.target.v(i, j).compose(self.part(i, j))):
                raise ValueError(f"not vertical-compatible at ({i},{j})")
            if not self.part(i + 1, j).compose(self.source.h(i, j)).same_content(
                    self.target.h(i, j).compose(self.part(i, j))):
                raise ValueError(f"not horizontal-compatible at ({i},{j})")
        return self


def total_complex(dc: DoubleComplex) -> ComplexOfModules:
    """T(M)^n = (+)_i M^{i, n-i}, summands ascending in i, unsigned blocks."""
    pres, window = dc.pres, dc.window
    by_n: dict[int, list] = {}
    for (i, j) in dc.cells:
        by_n.setdefault(i + j, []).append(i)
    modules = {}
    order = {}
    for n, idxs in by_n.items():
        idxs = sorted(set(idxs))
        order[n] = idxs
        blocks = []
        for i in idxs:
            blocks.extend(blocks_of(dc.cell(i, n - i)))
        modules[n] = direct_sum(pres, window, blocks)
    diffs = {}
    for n in sorted(modules):
        src_idx = order.get(n, [])
        tgt_idx = order.get(n + 1, [])
        if not tgt_idx or not src_idx:
            continue
        src = modules[n]
        tgt = modules[n + 1]
        mats = {}
        for (deg, x) in set(src.dims) | set(tgt.dims):
            grid = []
            for jj in tgt_idx:
                row = []
                for ii in src_idx:
                    if jj == ii:
                        part = dc.v(ii, n - ii).piece(deg, x)
                    elif jj == ii + 1:
                        part = dc.h(ii, n - ii).piece(deg, x)
                    else:
                        part = Matrix.zeros(pres.field,
                                            dc.cell(jj, n + 1 - jj).dim(deg, x),
                                            dc.cell(ii, n - ii).dim(deg, x))
                    row.append(part)
                grid.append(row)
            mats[(deg, x)] = Matrix.block(pres.field, grid)
        d = GradedMorphism(src, tgt, mats)
        if not d.is_zero():
            diffs[n] = d
    return ComplexOfModules(pres, window, modules, diffs, validate=False)


def total_chain_map(f: DoubleChainMap) -> ChainMap:
    src = total_complex(f.source)
    tgt = total_complex(f.target)
    parts = {}
    for n in set(src.modules) | set(tgt.modules):
        src_idx = sorted({i for (i, j) in f.source.cells if i + j == n})
        tgt_idx = sorted({i for (i, j) in f.target.cells if i + j == n})
        sm, tm = src.module(n), tgt.module(n)
        mats = {}
        for (deg, x) in set(sm.dims) | set(tm.dims):
            grid = []
            for jj in tgt_idx:
                row = []
                for ii in src_idx:
                    if jj == ii:
                        row.append(f.part(ii, n - ii).piece(deg, x))
                    else:
                        row.append(Matrix.zeros(f.source.pres.field,
                                                f.target.cell(jj, n - jj).dim(deg, x),
                                                f.source.cell(ii, n - ii).dim(deg, x)))
                grid.append(row)
            if grid and grid[0]:
                mats[(deg, x)] = Matrix.block(f.source.pres.field, grid)
        parts[n] = GradedMorphism(sm, tm, mats)
    return ChainMap(src, tgt, parts)


def horizontal_cone(f: DoubleChainMap) -> DoubleComplex:
    """Rows are the mapping cones of the rows of f."""
    m, n = f.source, f.target
    pres, window = m.pres, m.window
    keys = {(i, j) for (i, j) in set(m.cells) | set(n.cells)} | \
           {(i - 1, j) for (i, j) in m.cells}
    cells = {}
    for (i, j) in keys:
        blocks = list(blocks_of(m.cell(i + 1, j))) + list(blocks_of(n.cell(i, j)))
        cells[(i, j)] = direct_sum(pres, window, blocks)
    vert, horiz = {}, {}
    for (i, j) in keys:
        src = cells[(i, j)]
        vt = cells.get((i, j + 1))
        if vt is not None:
            vert[(i, j)] = _block2(src, vt, m.v(i + 1, j).negate(), None,
                                   None, n.v(i, j), pres)
        ht = cells.get((i + 1, j))
        if ht is not None:
            horiz[(i, j)] = _block2(src, ht, m.h(i + 1, j).negate(), None,
                                    f.part(i + 1, j), n.h(i, j), pres)
    return DoubleComplex(pres, window, cells, vert, horiz, validate=False)


def vertical_cone(f: DoubleChainMap) -> DoubleComplex:
    """Columns are the mapping cones of the columns of f."""
    m, n = f.source, f.target
    pres, window = m.pres, m.window
    keys = {(i, j) for (i, j) in set(m.cells) | set(n.cells)} | \
           {(i, j - 1) for (i, j) in m.cells}
    cells = {}
    for (i, j) in keys:
        blocks = list(blocks_of(m.cell(i, j + 1))) + list(blocks_of(n.cell(i, j)))
        cells[(i, j)] = direct_sum(pres, window, blocks)
    vert, horiz = {}, {}
    for (i, j) in keys:
        src = cells[(i, j)]
        vt = cells.get((i, j + 1))
        if vt is not None:
            vert[(i, j)] = _block2(src, vt, m.v(i, j + 1).negate(), None,
                                   f.part(i, j + 1), n.v(i, j), pres)
        ht = cells.get((i + 1, j))
        if ht is not None:
            horiz[(i, j)] = _block2(src, ht, m.h(i, j + 1).negate(), None,
                                    None, n.h(i, j), pres)
    return DoubleComplex(pres, window, cells, vert, horiz, validate=False)


def _block2(src, tgt, a, b, c, d, pres):
    """2x2 block morphism [[a, b], [c, d]]; None blocks are zero."""
    mats = {}
    for (deg, x) in set(src.dims) | set(tgt.dims):
        pa = a.piece(deg, x)
        pd = d.piece(deg, x)
        pb = b.piece(deg, x) if b is not None else Matrix.zeros(pres.field, pa.nrows, pd.ncols)
        pc = c.piece(deg, x) if c is not None else Matrix.zeros(pres.field, pd.nrows, pa.ncols)
        mats[(deg, x)] = Matrix.block(pres.field, [[pa, pb], [pc, pd]])
    return GradedMorphism(src, tgt, mats)


# -- homology ---------------------------------------------------------------------


def homology_tables(x: ComplexOfModules):
    """dict n -> dict[(degree, vertex)] -> dim H^n."""
    out = {}
    lo, hi = x.support()
    for n in range(lo, hi + 1):
        table = homology_at(x, n)
        if table:
            out[n] = table
    return out


def homology_at(x: ComplexOfModules, n: int):
    table = {}
    m = x.module(n)
    dn = x.diff(n)
    dp = x.diff(n - 1)
    for (i, v), d in m.dims.items():
        ker = d - dn.piece(i, v).rank() if dn.piece(i, v).nrows else d
        im = dp.piece(i, v).rank() if dp.piece(i, v).ncols else 0
        val = ker - im
        if val:
            table[(i, v)] = val
    return table


def is_acyclic(x: ComplexOfModules, positions=None) -> bool:
    lo, hi = x.support()
    rng = positions if positions is not None else range(lo, hi + 1)
    return all(not homology_at(x, n) for n in rng)


def homology_module(x: ComplexOfModules, n: int):
    """H^n as a graded module plus its kernel-representative data.

    Returns (module, reps) where reps maps (degree, vertex) to row vectors in
    the coordinates of x.module(n) projecting to the chosen basis.
    """
    from .modules import submodule, quotient_module

    m = x.module(n)
    dn = x.diff(n)
    dp = x.diff(n - 1)
    ker_pieces = {}
    for (i, v), d in m.dims.items():
        mat = dn.piece(i, v)
        ker_pieces[(i, v)] = Subspace.from_matrix(mat.kernel_basis())
    ksub, incl = submodule(m, ker_pieces)
    img_in_k = {}
    for (i, v), sp in ker_pieces.items():
        if not sp.dim:
            continue
        mat = dp.piece(i, v)
        vecs = []
        for c in range(mat.ncols):
            vec = [mat.rows[r][c] for r in range(mat.nrows)]
            vecs.append(sp.coordinates(vec))
        img_in_k[(i, v)] = Subspace.from_vectors(m.pres.field, sp.dim, vecs)
    h, proj = quotient_module(ksub, img_in_k)
    reps = {}
    for (i, v), dim in h.dims.items():
        sp = ker_pieces[(i, v)]
        sub = img_in_k.get((i, v)) or Subspace.zero(m.pres.field, sp.dim)
        pivset = set(sub.pivots)
        free = [c for c in range(sp.dim) if c not in pivset]
        reps[(i, v)] = [sp.basis.rows[c] for c in free]
    return h, reps


def quasi_iso_check(f: ChainMap, positions=None) -> bool:
    cone = mapping_cone(f)
    return is_acyclic(cone, positions)


# -- homotopies ----------------------------------------------------------------


def null_homotopy_solve(f: ChainMap):
    """Find graded morphisms u^n: X^n -> Y^{n-1} with f = u d + d u, or None.

    The homotopy equations and the Lambda-linearity constraints are linear in
    the entries of the u^n, so this is one exact linear solve.
    """
    x, y = f.source, f.target
    pres = x.pres
    field = pres.field
    quiver = pres.quiver
    slots = []
    offset = {}
    total = 0
    positions = sorted(set(x.modules) | {n + 1 for n in y.modules})
    for n in positions:
        for (i, v) in sorted(set(x.module(n).dims) & set(y.module(n - 1).dims)):
            size = x.module(n).dim(i, v) * y.module(n - 1).dim(i, v)
            offset[(n, i, v)] = total
            slots.append((n, i, v))
            total += size

    def var(n, i, v, r, c):
        return offset[(n, i, v)] + r * x.module(n).dim(i, v) + c

    rows = []
    rhs = []

    def add_equation(coeffs, value):
        row = [field.zero] * total
        for idx, cf in coeffs.items():
            row[idx] = row[idx] + cf if field.characteristic == 0 else (row[idx] + cf) % field.p
        rows.append(row)
        rhs.append(value)

    # homotopy equations: f^n = u^{n+1} d_x^n + d_y^{n-1} u^n, per piece entry
    for n in set(x.modules) | set(y.modules):
        xm = x.module(n)
        ym = y.module(n)
        dxn = x.diff(n)
        dyn = y.diff(n - 1)
        for (i, v) in set(xm.dims) | set(ym.dims):
            fmat = f.part(n).piece(i, v)
            for r in range(ym.dim(i, v)):
                for c in range(xm.dim(i, v)):
                    coeffs = {}
                    dx = dxn.piece(i, v)
                    for k in range(x.module(n + 1).dim(i, v)):
                        if dx.rows[k][c] and (n + 1, i, v) in offset:
                            idx = var(n + 1, i, v, r, k)
                            coeffs[idx] = coeffs.get(idx, field.zero) + dx.rows[k][c]
                    dy = dyn.piece(i, v)
                    for k in range(y.module(n - 1).dim(i, v)):
                        if dy.rows[r][k] and (n, i, v) in offset:
                            idx = var(n, i, v, k, c)
                            coeffs[idx] = coeffs.get(idx, field.zero) + dy.rows[r][k]
                    add_equation(coeffs, fmat.rows[r][c] if fmat.nrows else field.zero)
    # linearity: y-action . u = u . x-action
    for n in positions:
        xm = x.module(n)
        ym1 = y.module(n - 1)
        for arrow in quiver.arrows:
            for i in range(x.window[0] - 1, x.window[1] + 1):
                ax = xm.action(arrow.name, i)
                ay = ym1.action(arrow.name, i)
                for r in range(ym1.dim(i + 1, arrow.target)):
                    for c in range(xm.dim(i, arrow.source)):
                        coeffs = {}
                        for k in range(ym1.dim(i, arrow.source)):
                            if ay.rows[r][k] and (n, i, arrow.source) in offset:
                                idx = var(n, i, arrow.source, k, c)
                                coeffs[idx] = coeffs.get(idx, field.zero) + ay.rows[r][k]
                        for k in range(xm.dim(i + 1, arrow.target)):
                            if ax.rows[k][c] and (n, i + 1, arrow.target) in offset:
                                idx = var(n, i + 1, arrow.target, r, k)
                                coeffs[idx] = coeffs.get(idx, field.zero) - ax.rows[k][c]
                        if coeffs:
                            add_equation(coeffs, field.zero)
    if total == 0:
        zero = all(v == field.zero for v in rhs)
        return {} if zero else None
    mat = Matrix.from_rows(field, rows) if rows else Matrix.zeros(field, 0, total)
    sol = solve(mat, rhs)
    if sol is None:
        return None
    out = {}
    for n in positions:
        mats = {}
        for (i, v) in set(x.module(n).dims) & set(y.module(n - 1).dims):
            entries = [[sol[var(n, i, v, r, c)] for c in range(x.module(n).dim(i, v))]
                       for r in range(y.module(n - 1).dim(i, v))]
            mats[(i, v)] = Matrix(field, y.module(n - 1).dim(i, v),
                                  x.module(n).dim(i, v), entries)
        if mats:
            out[n] = GradedMorphism(x.module(n), y.module(n - 1), mats)
    return out


def verify_homotopy(f: ChainMap, homotopy) -> bool:
    x, y = f.source, f.target
    for n in set(x.modules) | set(y.modules):
        un1 = homotopy.get(n + 1)
        un = homotopy.get(n)
        acc = zero_morphism(x.module(n), y.module(n))
        if un1 is not None:
            acc = acc.add(GradedMorphism(x.module(n), y.module(n),
                                         un1.compose(x.diff(n)).mats))
        if un is not None:
            acc = acc.add(GradedMorphism(x.module(n), y.module(n),
                                         y.diff(n - 1).compose(un).mats))
        if not acc.same_content(f.part(n)):
            return False
    return True


def acyclic_assembly_check(dc: DoubleComplex, n: int, mode: str):
    """Local acyclic assembly: verify the hypothesis, then H^n of the total.

    mode="rows" requires H^{n-j}(row j) = 0 for all j; mode="columns"
    requires H^{n-i}(column i) = 0.  Returns (verdict, trace), where verdict
    is None when the hypothesis fails.
    """
    trace = {"mode": mode, "position": n, "hypothesis": []}
    ok = True
    if mode == "rows":
        js = sorted({j for (_, j) in dc.cells})
        for j in js:
            hom = homology_at(dc.row(j), n - j)
            trace["hypothesis"].append({"row": j, "position": n - j,
                                        "dims": {f"{k[0]},{k[1]}": v for k, v in hom.items()}})
            if hom:
                ok = False
    elif mode == "columns":
        is_ = sorted({i for (i, _) in dc.cells})
        for i in is_:
            hom = homology_at(dc.column(i), n - i)
            trace["hypothesis"].append({"column": i, "position": n - i,
                                        "dims": {f"{k[0]},{k[1]}": v for k, v in hom.items()}})
            if hom:
                ok = False
    else:
        raise ValueError("mode must be 'rows' or 'columns'")
    if not ok:
        trace["verdict"] = "hypothesis-failed"
        return None, trace
    total_h = homology_at(total_complex(dc), n)
    trace["total_homology"] = {f"{k[0]},{k[1]}": v for k, v in total_h.items()}
    verdict = not total_h
    trace["verdict"] = "acyclic" if verdict else "NOT-acyclic"
    return verdict, trace
