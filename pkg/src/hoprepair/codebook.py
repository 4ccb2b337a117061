"""Storage-code constructions and system state.

Four builders:
  * build_tandem_code      -- (n, k) Vandermonde code, one fragment per node.
  * build_grid_code_2x3    -- the six-node systematic code with rho-weighted
                              parity first fragments (nodes 1..3 parity on the
                              top row, 4..6 systematic beneath).
  * build_grid_code_general-- systematic grid code for n = 2k node grids with
                              an even column count (transposing when only the
                              row count is even); parity partner of the
                              systematic node at (i, j) sits at (i, j + s/2).
  * build_slotwise_code    -- per-fragment-slot Vandermonde code used by the
                              tandem-embedding repair scheme on arbitrary
                              connected topologies.

Node contents are CoeffVectors over the M message fragments, so MDS and
exact-repair checks are exact linear algebra.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .field import FieldElement, PrimeField, next_prime_above
from .linalg import CoeffVector, Matrix, SingularMatrixError, stack_vectors, vandermonde
from .topology import Topology, make_grid, make_tandem


class CodeConstructionError(ValueError):
    pass


def default_field(n: int) -> PrimeField:
    """Smallest prime strictly greater than the node count."""
    return PrimeField(next_prime_above(n))


@dataclass(frozen=True)
class SystemParams:
    """(n, k) system with file size M split into fragments of one field symbol."""

    n: int
    k: int
    M: int
    field: PrimeField

    def __post_init__(self):
        if self.k < 1 or self.n < 2 or self.k > self.n:
            raise CodeConstructionError(f"invalid (n, k) = ({self.n}, {self.k})")
        if self.M % self.k != 0:
            raise CodeConstructionError(
                f"k = {self.k} must divide the file size M = {self.M}"
            )

    @property
    def alpha(self) -> int:
        return self.M // self.k


@dataclass(frozen=True)
class GridLayout:
    """Logical layout of a systematic grid code on an r x s lattice.

    Logical coordinates always have an even number of columns; when the
    physical grid has an odd column count but an even row count the layout
    is transposed (logical (i, j) is physical (j, i)). Systematic nodes
    occupy logical columns 1..s/2; the parity partner of the systematic
    node at (i, j) is at (i, j + s/2).
    """

    phys_rows: int
    phys_cols: int
    transposed: bool

    @classmethod
    def for_grid(cls, r: int, s: int) -> "GridLayout":
        n = r * s
        if n % 2 != 0:
            raise CodeConstructionError(
                f"{r}x{s} grid has an odd node count {n}; n = 2k is required"
            )
        if s % 2 == 0:
            return cls(phys_rows=r, phys_cols=s, transposed=False)
        if r % 2 == 0:
            return cls(phys_rows=r, phys_cols=s, transposed=True)
        raise CodeConstructionError(f"neither dimension of {r}x{s} is even")

    @property
    def r(self) -> int:
        return self.phys_cols if self.transposed else self.phys_rows

    @property
    def s(self) -> int:
        return self.phys_rows if self.transposed else self.phys_cols

    @property
    def n(self) -> int:
        return self.phys_rows * self.phys_cols

    @property
    def k(self) -> int:
        return self.n // 2

    def node(self, i: int, j: int) -> int:
        """Physical node id of logical (i, j)."""
        if not (1 <= i <= self.r and 1 <= j <= self.s):
            raise CodeConstructionError(f"logical ({i},{j}) outside {self.r}x{self.s}")
        pi, pj = (j, i) if self.transposed else (i, j)
        return (pi - 1) * self.phys_cols + pj

    def coords(self, node: int) -> tuple:
        """Logical (i, j) of a physical node id."""
        if not 1 <= node <= self.n:
            raise CodeConstructionError(f"node {node} outside the grid")
        pi, pj = divmod(node - 1, self.phys_cols)
        pi, pj = pi + 1, pj + 1
        return (pj, pi) if self.transposed else (pi, pj)

    def is_systematic(self, node: int) -> bool:
        _, j = self.coords(node)
        return j <= self.s // 2

    def systematic_nodes(self) -> list:
        return [
            self.node(i, j)
            for i in range(1, self.r + 1)
            for j in range(1, self.s // 2 + 1)
        ]

    def parity_nodes(self) -> list:
        return [
            self.node(i, j)
            for i in range(1, self.r + 1)
            for j in range(self.s // 2 + 1, self.s + 1)
        ]

    def partner(self, node: int) -> int:
        """Parity partner of a systematic node (same row, column + s/2),
        and vice versa."""
        i, j = self.coords(node)
        half = self.s // 2
        return self.node(i, j + half) if j <= half else self.node(i, j - half)

    def t_index(self, i: int, j: int) -> int:
        """Systematic index t = (i-1) * s/2 + j, in 1..k."""
        if j > self.s // 2:
            raise CodeConstructionError(f"logical ({i},{j}) is not systematic")
        return (i - 1) * (self.s // 2) + j

    def topology(self) -> Topology:
        return make_grid(self.phys_rows, self.phys_cols)


@dataclass(frozen=True)
class StorageState:
    """Immutable system state: every node's fragments as CoeffVectors."""

    params: SystemParams
    contents: dict  # node id -> tuple of CoeffVectors, each of length M
    kind: str
    topology: Topology
    layout: GridLayout | None = None
    xi: tuple = ()  # parity coefficient columns (tuples of ints), when present
    rhos: tuple = ()
    message_labels: tuple = ()

    def __post_init__(self):
        alpha = self.params.alpha
        for node, vecs in self.contents.items():
            if len(vecs) != alpha:
                raise CodeConstructionError(
                    f"node {node} stores {len(vecs)} fragments, expected {alpha}"
                )
            for v in vecs:
                if len(v) != self.params.M:
                    raise CodeConstructionError("coefficient vector length != M")

    def node_vectors(self, node: int) -> tuple:
        return self.contents[node]

    def with_contents(self, node: int, vectors) -> "StorageState":
        new_contents = dict(self.contents)
        new_contents[node] = tuple(vectors)
        return StorageState(
            params=self.params,
            contents=new_contents,
            kind=self.kind,
            topology=self.topology,
            layout=self.layout,
            xi=self.xi,
            rhos=self.rhos,
            message_labels=self.message_labels,
        )

    def stacked_matrix(self, subset) -> Matrix:
        vecs = []
        for node in subset:
            vecs.extend(self.contents[node])
        return stack_vectors(vecs)

    def to_dict(self) -> dict:
        return {
            "params": {
                "n": self.params.n,
                "k": self.params.k,
                "M": self.params.M,
                "q": self.params.field.q,
                "kind": self.kind,
            },
            "message_labels": list(self.message_labels),
            "nodes": {
                str(node): [list(v.coeffs) for v in vecs]
                for node, vecs in sorted(self.contents.items())
            },
        }


def _tandem_labels(k: int) -> tuple:
    return tuple(f"m{i}" for i in range(1, k + 1))


def _grid_labels(k: int) -> tuple:
    if k <= 26:
        names = [string.ascii_lowercase[t] for t in range(k)]
    else:
        names = [f"x{t + 1}" for t in range(k)]
    return tuple(f"{nm}1" for nm in names) + tuple(f"{nm}2" for nm in names)


def build_tandem_code(
    params: SystemParams, evals: list | None = None
) -> StorageState:
    """Node i stores the single fragment (1, a_i, a_i^2, ..., a_i^(k-1)) . m."""
    n, k, fld = params.n, params.k, params.field
    if params.alpha != 1 or params.M != params.k:
        raise CodeConstructionError("tandem code requires M = k (one fragment per node)")
    if fld.q <= n:
        raise CodeConstructionError(
            f"tandem code needs q > n: q = {fld.q}, n = {n}"
        )
    if evals is None:
        evals = [fld(i) for i in range(1, n + 1)]
    vals = [int(e) if isinstance(e, FieldElement) else e % fld.q for e in evals]
    if len(vals) != n:
        raise CodeConstructionError(f"need {n} evaluation points, got {len(vals)}")
    if len(set(vals)) != n:
        raise CodeConstructionError(f"evaluation points must be distinct: {vals}")
    gen = vandermonde([fld(v) for v in vals], k)
    contents = {
        i: (CoeffVector(gen.col(i - 1), fld),) for i in range(1, n + 1)
    }
    return StorageState(
        params=params,
        contents=contents,
        kind="tandem",
        topology=make_tandem(n),
        message_labels=_tandem_labels(k),
    )


def build_grid_code_2x3(
    field: PrimeField | None = None,
    alphas: list | None = None,
    rhos: list | None = None,
    require_nonzero_rho: bool = True,
) -> StorageState:
    """The 2x3 grid code: parity nodes 1..3 on the top row, systematic nodes
    4..6 beneath them storing (a1,a2), (b1,b2), (c1,c2).

    Parity node i stores rho_i * x2_i + xi_i . m1 and xi_i . m2, where x2_i
    is the second fragment of its partner (node i+3) and xi_i is column i of
    a 3x3 Vandermonde matrix. Message order: (a1, b1, c1, a2, b2, c2).
    """
    fld = field if field is not None else default_field(6)
    if alphas is None:
        alphas = [1, 2, 3]
    vals = [int(a) % fld.q for a in alphas]
    if len(vals) != 3 or len(set(vals)) != 3:
        raise CodeConstructionError(f"need 3 distinct alphas, got {alphas}")
    if rhos is None:
        rhos = [1, 1, 1]
    rho_vals = [int(x) % fld.q for x in rhos]
    if len(rho_vals) != 3:
        raise CodeConstructionError("need exactly 3 rho coefficients")
    if require_nonzero_rho and any(x == 0 for x in rho_vals):
        raise CodeConstructionError(f"rho coefficients must be nonzero, got {rhos}")

    params = SystemParams(n=6, k=3, M=6, field=fld)
    xi_mat = vandermonde([fld(v) for v in vals], 3)
    xi_cols = tuple(xi_mat.col(c) for c in range(3))  # xi_i = (1, a_i, a_i^2)

    def unit(idx):
        return CoeffVector.unit(6, idx, fld)

    contents = {}
    # Systematic: node 3+i holds message coordinates (i-1) and 3+(i-1).
    for i in range(1, 4):
        contents[3 + i] = (unit(i - 1), unit(3 + i - 1))
    # Parity: node i pairs with node 3+i.
    for i in range(1, 4):
        xi_i = xi_cols[i - 1]
        p1 = CoeffVector(
            [xi_i[0], xi_i[1], xi_i[2], 0, 0, 0], fld
        ) + unit(3 + i - 1).scale(rho_vals[i - 1])
        p2 = CoeffVector([0, 0, 0, xi_i[0], xi_i[1], xi_i[2]], fld)
        contents[i] = (p1, p2)

    return StorageState(
        params=params,
        contents=contents,
        kind="grid2x3",
        topology=make_grid(2, 3),
        xi=xi_cols,
        rhos=tuple(rho_vals),
        message_labels=_grid_labels(3),
    )


def build_grid_code_general(
    layout: GridLayout, field: PrimeField | None = None
) -> StorageState:
    """Systematic grid code on an n = 2k grid.

    The systematic node at logical (i, j) stores (m1_t, m2_t) with
    t = (i-1) * s/2 + j. Its partner at (i, j + s/2) stores
    m2_t + xi_t . m1 and xi_t . m2, with xi_t column t of a k x k
    Vandermonde matrix (requires q > k).
    """
    k = layout.k
    fld = field if field is not None else default_field(layout.n)
    if fld.q <= k:
        raise CodeConstructionError(f"grid code needs q > k: q = {fld.q}, k = {k}")
    params = SystemParams(n=layout.n, k=k, M=2 * k, field=fld)
    xi_mat = vandermonde([fld(t) for t in range(1, k + 1)], k)
    xi_cols = tuple(xi_mat.col(c) for c in range(k))

    def m1_unit(t):
        return CoeffVector.unit(2 * k, t - 1, fld)

    def m2_unit(t):
        return CoeffVector.unit(2 * k, k + t - 1, fld)

    contents = {}
    half = layout.s // 2
    for i in range(1, layout.r + 1):
        for j in range(1, half + 1):
            t = layout.t_index(i, j)
            contents[layout.node(i, j)] = (m1_unit(t), m2_unit(t))
            xi_t = xi_cols[t - 1]
            p1 = CoeffVector(list(xi_t) + [0] * k, fld) + m2_unit(t)
            p2 = CoeffVector([0] * k + list(xi_t), fld)
            contents[layout.node(i, j + half)] = (p1, p2)

    return StorageState(
        params=params,
        contents=contents,
        kind="grid-general",
        topology=layout.topology(),
        layout=layout,
        xi=xi_cols,
        message_labels=_grid_labels(k),
    )


def build_slotwise_code(
    topology: Topology,
    k: int,
    slots: int = 2,
    field: PrimeField | None = None,
) -> StorageState:
    """Per-slot (n, k) Vandermonde code on an arbitrary connected topology.

    Each node stores `slots` fragments; slot s of node i encodes the s-th
    block of k message fragments with the coefficient row of node i. Any k
    nodes reconstruct every block, and the accumulate-and-forward repair
    scheme applies slot by slot.
    """
    n = topology.n
    fld = field if field is not None else default_field(n)
    if fld.q <= n:
        raise CodeConstructionError(f"slotwise code needs q > n: q = {fld.q}, n = {n}")
    params = SystemParams(n=n, k=k, M=slots * k, field=fld)
    gen = vandermonde([fld(i) for i in range(1, n + 1)], k)
    contents = {}
    for node in range(1, n + 1):
        col = gen.col(node - 1)
        vecs = []
        for s in range(slots):
            coeffs = [0] * (slots * k)
            for t in range(k):
                coeffs[s * k + t] = col[t]
            vecs.append(CoeffVector(coeffs, fld))
        contents[node] = tuple(vecs)
    if slots == 2:
        labels = _grid_labels(k)
    else:
        labels = tuple(
            f"m{s + 1}_{t + 1}" for s in range(slots) for t in range(k)
        )
    return StorageState(
        params=params,
        contents=contents,
        kind="slotwise",
        topology=topology,
        message_labels=labels,
    )


def reconstruct_matrix(state: StorageState, subset) -> Matrix:
    """Inverse of the stacked coefficient matrix for a k-subset of nodes.

    Raises SingularMatrixError when the subset cannot reconstruct, i.e. when
    the MDS property fails on it.
    """
    nodes = sorted(subset)
    if len(nodes) != state.params.k:
        raise CodeConstructionError(
            f"reconstruction needs exactly k = {state.params.k} nodes, got {len(nodes)}"
        )
    return state.stacked_matrix(nodes).invert()


def evaluate_contents(state: StorageState, message) -> dict:
    """Concrete stored values for a concrete message (list of M ints)."""
    msg = [int(v) % state.params.field.q for v in message]
    if len(msg) != state.params.M:
        raise CodeConstructionError(f"message must have {state.params.M} fragments")
    return {
        node: tuple(v.dot(msg) for v in vecs)
        for node, vecs in state.contents.items()
    }


def reconstruct(state: StorageState, subset, observed: dict) -> list:
    """Recover the M message fragments from the observed values at a k-subset.

    `observed` maps node id -> sequence of alpha concrete fragment values.
    """
    nodes = sorted(subset)
    inv = reconstruct_matrix(state, nodes)
    rhs = []
    for node in nodes:
        vals = observed[node]
        if len(vals) != state.params.alpha:
            raise CodeConstructionError(f"node {node}: expected alpha values")
        rhs.extend(int(v) for v in vals)
    q = state.params.field.q
    return [
        sum(int(inv.entry(r, c)) * rhs[c] for c in range(inv.cols)) % q
        for r in range(inv.rows)
    ]


def mds_subset_ok(state: StorageState, subset) -> bool:
    """True iff the given k-subset of nodes can reconstruct the file."""
    return state.stacked_matrix(sorted(subset)).rank() == state.params.M


def all_k_subsets(state: StorageState):
    return combinations(range(1, state.params.n + 1), state.params.k)
