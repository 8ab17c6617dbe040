"""Quadratic presentations kQ/R: graded pieces, R^(n) spaces, quadratic duals,
and the special multiserial / condition checks.

Every piece is coordinatized over the lexicographic path bases of the quiver
and stored canonically, so equality of presentations and of pieces is plain
data equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .linalg import Field, Matrix, QQ, Subspace
from .quiver import Path, PathEnumerator, Quiver


@dataclass
class AlgebraPiece:
    """Basis data for e_y Lambda_n e_x (paths x -> y modulo R_n(x, y))."""

    degree: int
    source: object
    target: object
    rel: Subspace
    basis_paths: tuple[Path, ...]

    @property
    def dim(self) -> int:
        return len(self.basis_paths)

    def reduce_vector(self, vec) -> list:
        """Class coordinates (w.r.t. basis_paths) of a kQ_n(x,y) vector."""
        reduced = self.rel.reduce(vec)
        pivset = set(self.rel.pivots)
        return [reduced[c] for c in range(self.rel.ambient) if c not in pivset]


class Presentation:
    """A quadratic presentation Lambda = kQ/R over an exact field."""

    def __init__(self, quiver: Quiver, field: Field = QQ, relations=None,
                 degree_cap: int = 8):
        self.quiver = quiver
        self.field = field
        self.degree_cap = degree_cap
        self.paths = PathEnumerator(quiver, degree_cap)
        self.relations: dict[tuple, Subspace] = {}
        for (x, z), space in (relations or {}).items():
            ambient = len(self.paths.basis(2, x, z))
            if space.ambient != ambient:
                raise ValueError(f"relation space at ({x},{z}) has wrong ambient")
            if space.dim:
                self.relations[(x, z)] = space
        self._rel_piece: dict[tuple, Subspace] = {}
        self._r_upper: dict[tuple, Subspace] = {}
        self._alg_piece: dict[tuple, AlgebraPiece] = {}
        self._support: dict[tuple, frozenset] | None = None
        self._dual: Presentation | None = None
        self._opp: Presentation | None = None

    # -- basic coordinate plumbing ------------------------------------------

    def path_basis(self, n, x, y):
        return self.paths.basis(n, x, y)

    def zero_space(self, n, x, y) -> Subspace:
        return Subspace.zero(self.field, len(self.path_basis(n, x, y)))

    def path_vector(self, path: Path):
        """Indicator coordinate vector of a path in its kQ_n(x,y) basis."""
        basis = self.path_basis(path.length(), path.start, path.end(self.quiver))
        vec = [self.field.zero] * len(basis)
        vec[basis.position(path)] = self.field.one
        return vec

    def relation_space(self, x, z) -> Subspace:
        return self.relations.get((x, z)) or self.zero_space(2, x, z)

    # -- graded pieces of R and of Lambda -----------------------------------

    def relation_piece(self, n: int, x, y) -> Subspace:
        """R_n(x, y), via R_n = kQ_1 . R_{n-1} + R_2 . kQ_{n-2}."""
        if n > self.degree_cap:
            raise ValueError(f"degree {n} exceeds cap {self.degree_cap}")
        key = (n, x, y)
        if key in self._rel_piece:
            return self._rel_piece[key]
        if n < 2:
            space = self.zero_space(n, x, y)
        elif n == 2:
            space = self.relation_space(x, y)
        else:
            target = self.path_basis(n, x, y)
            vectors = []
            for aidx in self.quiver.in_arrows(y):
                arrow = self.quiver.arrows[aidx]
                sub = self.relation_piece(n - 1, x, arrow.source)
                src = self.path_basis(n - 1, x, arrow.source)
                for row in sub.basis.rows:
                    vectors.append(self._append_arrow(row, src, aidx, target))
            for a in self.quiver.vertices:
                gen = self.relations.get((a, y))
                if gen is None:
                    continue
                src = self.path_basis(2, a, y)
                for q in self.path_basis(n - 2, x, a).paths:
                    for row in gen.basis.rows:
                        vectors.append(self._prepend_path(row, src, q, target))
            space = Subspace.from_vectors(self.field, len(target), vectors)
        self._rel_piece[key] = space
        return space

    def _append_arrow(self, row, src_basis, aidx, target_basis):
        vec = [self.field.zero] * len(target_basis)
        for coeff, p in zip(row, src_basis.paths):
            if coeff:
                vec[target_basis.index[p.arrows + (aidx,)]] = coeff
        return vec

    def _prepend_path(self, row, src_basis, q: Path, target_basis):
        vec = [self.field.zero] * len(target_basis)
        for coeff, p in zip(row, src_basis.paths):
            if coeff:
                vec[target_basis.index[q.arrows + p.arrows]] = coeff
        return vec

    def algebra_piece(self, n: int, x, y) -> AlgebraPiece:
        """e_y Lambda_n e_x with its canonical representative paths."""
        key = (n, x, y)
        if key not in self._alg_piece:
            rel = self.relation_piece(n, x, y)
            basis = self.path_basis(n, x, y)
            pivset = set(rel.pivots)
            reps = tuple(p for i, p in enumerate(basis.paths) if i not in pivset)
            self._alg_piece[key] = AlgebraPiece(n, x, y, rel, reps)
        return self._alg_piece[key]

    def dim_piece(self, n, x, y) -> int:
        return self.algebra_piece(n, x, y).dim

    def lambda_vanishing_degree(self, limit: int | None = None) -> int | None:
        """Least d with Lambda_d = 0, if any (then Lambda_e = 0 for all e >= d).

        Scans degrees up to min(limit, cap); pieces are generated in degree 1,
        so the first vanishing degree is conclusive.
        """
        top = self.degree_cap if limit is None else min(limit, self.degree_cap)
        for d in range(top + 1):
            if all(self.dim_piece(d, x, y) == 0
                   for x in self.quiver.vertices for y in self.quiver.vertices):
                return d
        return None

    # -- multiplication ------------------------------------------------------

    def left_arrow_matrix(self, arrow_name: str, n: int, x) -> Matrix:
        """Left multiplication by an arrow a: w->z on e_w Lambda_n e_x."""
        arrow = self.quiver.arrow(arrow_name)
        aidx = self.quiver.arrow_index(arrow_name)
        src = self.algebra_piece(n, x, arrow.source)
        tgt = self.algebra_piece(n + 1, x, arrow.target)
        tgt_basis = self.path_basis(n + 1, x, arrow.target)
        cols = []
        for p in src.basis_paths:
            vec = [self.field.zero] * len(tgt_basis)
            vec[tgt_basis.index[p.arrows + (aidx,)]] = self.field.one
            cols.append(tgt.reduce_vector(vec))
        return _from_columns(self.field, tgt.dim, cols)

    def right_arrow_matrix(self, arrow_name: str, n: int, w) -> Matrix:
        """Right multiplication by an arrow a: y->x, e_w Lambda_n e_x -> e_w Lambda_{n+1} e_y."""
        arrow = self.quiver.arrow(arrow_name)
        aidx = self.quiver.arrow_index(arrow_name)
        src = self.algebra_piece(n, arrow.target, w)
        tgt = self.algebra_piece(n + 1, arrow.source, w)
        tgt_basis = self.path_basis(n + 1, arrow.source, w)
        cols = []
        for p in src.basis_paths:
            vec = [self.field.zero] * len(tgt_basis)
            vec[tgt_basis.index[(aidx,) + p.arrows]] = self.field.one
            cols.append(tgt.reduce_vector(vec))
        return _from_columns(self.field, tgt.dim, cols)

    def path_action_matrix(self, path: Path, n: int, x) -> Matrix:
        """Left multiplication by (the class of) a path on e_* Lambda_n e_x."""
        if path.length() == 0:
            piece = self.algebra_piece(n, x, path.start)
            return Matrix.identity(self.field, piece.dim)
        mat = None
        deg = n
        for aidx in path.arrows:
            name = self.quiver.arrows[aidx].name
            step = self.left_arrow_matrix(name, deg, x)
            mat = step if mat is None else step * mat
            deg += 1
        return mat

    # -- R^(n) ----------------------------------------------------------------

    def r_upper(self, n: int, a, x) -> Subspace:
        """R^(n)(a, x) = (sum_al al.R^(n-1)) cap (R_2 . kQ_{n-2}), full space for n <= 1."""
        if n > self.degree_cap:
            raise ValueError(f"degree {n} exceeds cap {self.degree_cap}")
        key = (n, a, x)
        if key in self._r_upper:
            return self._r_upper[key]
        basis = self.path_basis(n, a, x)
        if n <= 1:
            space = Subspace.full(self.field, len(basis))
        else:
            left_vectors = []
            for aidx in self.quiver.in_arrows(x):
                arrow = self.quiver.arrows[aidx]
                sub = self.r_upper(n - 1, a, arrow.source)
                src = self.path_basis(n - 1, a, arrow.source)
                for row in sub.basis.rows:
                    left_vectors.append(self._append_arrow(row, src, aidx, basis))
            right_vectors = []
            for b in self.quiver.vertices:
                gen = self.relations.get((b, x))
                if gen is None:
                    continue
                src = self.path_basis(2, b, x)
                for q in self.path_basis(n - 2, a, b).paths:
                    for row in gen.basis.rows:
                        right_vectors.append(self._prepend_path(row, src, q, basis))
            left = Subspace.from_vectors(self.field, len(basis), left_vectors)
            right = Subspace.from_vectors(self.field, len(basis), right_vectors)
            space = left.intersect(right)
        self._r_upper[key] = space
        return space

    def derivation_matrix(self, arrow_name: str, n: int, a) -> Matrix:
        """The derivation by a terminal arrow y->x as a map kQ_n(a,x) -> kQ_{n-1}(a,y)."""
        arrow = self.quiver.arrow(arrow_name)
        aidx = self.quiver.arrow_index(arrow_name)
        src = self.path_basis(n, a, arrow.target)
        tgt = self.path_basis(n - 1, a, arrow.source)
        mat = Matrix.zeros(self.field, len(tgt), len(src))
        for j, p in enumerate(src.paths):
            if p.arrows[-1] == aidx:
                mat.rows[tgt.index[p.arrows[:-1]]][j] = self.field.one
        return mat

    def r_upper_derivation(self, arrow_name: str, n: int, a) -> Matrix:
        """Derivation restricted to R^(n)(a, x) -> R^(n-1)(a, y), in the stored bases."""
        arrow = self.quiver.arrow(arrow_name)
        sub = self.r_upper(n, a, arrow.target)
        tgt = self.r_upper(n - 1, a, arrow.source)
        full = self.derivation_matrix(arrow_name, n, a)
        cols = [tgt.coordinates(full.apply(row)) for row in sub.basis.rows]
        return _from_columns(self.field, tgt.dim, cols)

    # -- opposites and duals ---------------------------------------------------

    def _transport_to_opposite(self, space: Subspace, x, y, opp_quiver) -> Subspace:
        """Carry a subspace of kQ_2(x,y) to kQ^o_2(y,x) along p -> p^o."""
        src = self.path_basis(2, x, y)
        opp_paths = PathEnumerator(opp_quiver, 2).basis(2, y, x)
        vectors = []
        for row in space.basis.rows:
            vec = [self.field.zero] * len(opp_paths)
            for coeff, p in zip(row, src.paths):
                if coeff:
                    vec[opp_paths.index[tuple(reversed(p.arrows))]] = coeff
            vectors.append(vec)
        return Subspace.from_vectors(self.field, len(opp_paths), vectors)

    def opposite(self) -> "Presentation":
        if self._opp is None:
            opp = self.quiver.opposite()
            rels = {}
            for (x, y), space in self.relations.items():
                rels[(y, x)] = self._transport_to_opposite(space, x, y, opp)
            self._opp = Presentation(opp, self.field, rels, self.degree_cap)
        return self._opp

    def quadratic_dual(self) -> "Presentation":
        """Lambda^! = kQ^o / R^!, with R^!_2(y,x) the transported perp of R_2(x,y)."""
        if self._dual is None:
            opp = self.quiver.opposite()
            rels = {}
            for x, y in itertools.product(self.quiver.vertices, repeat=2):
                basis = self.path_basis(2, x, y)
                if not len(basis):
                    continue
                perp = self.relation_space(x, y).perp()
                if perp.dim:
                    rels[(y, x)] = self._transport_to_opposite(perp, x, y, opp)
            self._dual = Presentation(opp, self.field, rels, self.degree_cap)
        return self._dual

    def same_relations(self, other: "Presentation") -> bool:
        if self.quiver != other.quiver or self.field != other.field:
            return False
        pairs = set(self.relations) | set(other.relations)
        return all(self.relation_space(x, y) == other.relation_space(x, y)
                   for (x, y) in pairs)

    def __eq__(self, other):
        return isinstance(other, Presentation) and self.same_relations(other)

    def __hash__(self):
        raise TypeError("presentations are not hashable")

    def pairing_dimension_check(self, a, x, n: int):
        """dim R^(n)(a,x) versus dim e_a Lambda^!_n e_x; they must agree."""
        left = self.r_upper(n, a, x).dim
        right = self.quadratic_dual().dim_piece(n, x, a)
        return left == right, left, right

    # -- multiserial and condition (*) -----------------------------------------

    def _relation_supports(self):
        """Per vertex pair, the set of length-2 paths involved in R_2."""
        if self._support is None:
            supp = {}
            for (x, z), space in self.relations.items():
                basis = self.path_basis(2, x, z)
                cols = set()
                for row in space.basis.rows:
                    cols.update(j for j, v in enumerate(row) if v)
                supp[(x, z)] = frozenset(basis.paths[j].arrows for j in cols)
            self._support = supp
        return self._support

    def special_multiserial_check(self):
        """Each arrow composes, on each side, with at most one arrow outside R.

        A length-2 path counts as killed by R when it appears in the support
        of the relation space of its vertex pair, i.e. as a summand of some
        relation; a path bound into a polynomial relation does not count as
        a surviving composite even though its class in Lambda_2 is nonzero.
        """
        supports = self._relation_supports()

        def free(first_idx, second_idx):
            a1 = self.quiver.arrows[first_idx]
            a2 = self.quiver.arrows[second_idx]
            return (first_idx, second_idx) not in supports.get((a1.source, a2.target), ())

        violations = []
        for idx, arrow in enumerate(self.quiver.arrows):
            succ = [self.quiver.arrows[b].name
                    for b in self.quiver.out_arrows(arrow.target) if free(idx, b)]
            pred = [self.quiver.arrows[c].name
                    for c in self.quiver.in_arrows(arrow.source) if free(c, idx)]
            if len(succ) > 1:
                violations.append({"arrow": arrow.name, "side": "successors", "arrows": succ})
            if len(pred) > 1:
                violations.append({"arrow": arrow.name, "side": "predecessors", "arrows": pred})
        return not violations, violations

    def circuits(self, x, z):
        """Minimal-support nonzero vectors of R_2(x,z), one per scalar class."""
        space = self.relations.get((x, z))
        if space is None:
            return []
        return subspace_circuits(space)

    def condition_star_check(self, side: str = "self"):
        """The condition on polynomial relations that forces Koszulity.

        side="self" checks the presentation itself, side="dual-of-opposite"
        checks the opposite presentation (equivalent to the dual condition).
        The excluded index in the conclusion is read literally: it is each
        witnessing term index i, and all other term indices j are tested.
        """
        pres = self if side == "self" else self.opposite()
        ok, violations = pres.special_multiserial_check()
        if not ok:
            raise ValueError(f"not special multiserial: {violations}")
        supports = pres._relation_supports()
        quiver = pres.quiver
        for (x, z) in sorted(pres.relations, key=_pair_key(quiver)):
            basis = pres.path_basis(2, x, z)
            for circ in pres.circuits(x, z):
                terms = [(coeff, basis.paths[j]) for j, coeff in enumerate(circ) if coeff]
                if len(terms) < 2:
                    continue  # monomial relation: quantifier domain empty
                witness_idx = set()
                for i, (_, p) in enumerate(terms):
                    beta = p.terminal_arrow()
                    for zeta in quiver.out_arrows(z):
                        pair = (quiver.arrows[beta].source, quiver.arrows[zeta].target)
                        path_vec = (beta, zeta)
                        rel = pres.relations.get(pair)
                        if rel is None or not rel.contains(_indicator(
                                pres, 2, pair[0], pair[1], path_vec)):
                            witness_idx.add(i)
                            break
                for i in sorted(witness_idx):
                    for gidx in quiver.in_arrows(x):
                        gamma = quiver.arrows[gidx]
                        for j, (_, pj) in enumerate(terms):
                            if j == i:
                                continue
                            alpha_j = pj.initial_arrow()
                            y_j = quiver.arrows[alpha_j].target
                            comp = (gidx, alpha_j)
                            if comp not in supports.get((gamma.source, y_j), ()):
                                counterexample = {
                                    "pair": (x, z),
                                    "relation": [pres.field.to_str(c) for c in circ],
                                    "witness_index": i,
                                    "gamma": gamma.name,
                                    "term_index": j,
                                }
                                return False, counterexample
        return True, None


def _indicator(pres: Presentation, n, x, y, arrows):
    basis = pres.path_basis(n, x, y)
    vec = [pres.field.zero] * len(basis)
    vec[basis.index[tuple(arrows)]] = pres.field.one
    return vec


def _pair_key(quiver):
    order = {v: i for i, v in enumerate(quiver.vertices)}
    return lambda pair: (order[pair[0]], order[pair[1]])


def _from_columns(field, nrows: int, cols) -> Matrix:
    mat = Matrix.zeros(field, nrows, len(cols))
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            mat.rows[i][j] = v
    return mat


def subspace_circuits(space: Subspace):
    """All circuits of a subspace w.r.t. the standard coordinates.

    A circuit is a nonzero member of minimal support, normalized to leading
    coefficient one; supports are enumerated in increasing size over the
    involved coordinates.
    """
    involved = sorted({j for row in space.basis.rows for j, v in enumerate(row) if v})
    if len(involved) > 22:
        raise ValueError("relation space too wide for circuit enumeration")
    found: list[tuple[frozenset, list]] = []
    for size in range(1, len(involved) + 1):
        for combo in itertools.combinations(involved, size):
            s = set(combo)
            if any(supp <= s for supp, _ in found):
                continue
            outside = [j for j in range(space.ambient) if j not in s]
            if space.dim == 0:
                continue
            restr = Matrix(space.field, space.dim, len(outside),
                           [[row[j] for j in outside] for row in space.basis.rows])
            combos = restr.transpose().kernel_basis()
            if combos.nrows == 0:
                continue
            vec = [space.field.zero] * space.ambient
            coefs = combos.rows[0]
            for c, row in zip(coefs, space.basis.rows):
                if c:
                    for j, v in enumerate(row):
                        if v:
                            vec[j] = vec[j] + c * v if space.field.characteristic == 0 \
                                else (vec[j] + c * v) % space.field.p
            supp = frozenset(j for j, v in enumerate(vec) if v)
            lead = next(vec[j] for j in sorted(supp))
            if space.field.characteristic == 0:
                vec = [v / lead for v in vec]
            else:
                inv = pow(lead, space.field.p - 2, space.field.p)
                vec = [v * inv % space.field.p for v in vec]
            found.append((supp, vec))
    found.sort(key=lambda t: sorted(t[0]))
    return [vec for _, vec in found]
