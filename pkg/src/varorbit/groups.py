"""Finite symmetry groups acting on time, body indices, and space.

A group element is a triple (time action, permutation, orthogonal matrix).
Time actions live on the circle R/Z (one full period normalized to length
1) and are stored with exact Fraction offsets so that closure and
classification are exact; matrices are deduplicated within a tolerance.

Classification follows the cyclic / brake / dihedral scheme: with l the
order of the time-action image, the fundamental domain is 1/l of the
period, rescaled to [0, 1] everywhere downstream (the "T = l"
normalization).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import MassSystem
from .errors import (
    CapExceeded,
    ClassificationError,
    InvalidGenerator,
    ShapeError,
)

MAT_TOL = 1e-9
ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class TimeAction:
    """Isometry t -> sign*t + shift of the circle R/Z (shift exact)."""

    reflect: bool
    shift: Fraction

    def __post_init__(self):
        object.__setattr__(self, "shift", self.shift % 1)

    @staticmethod
    def identity() -> "TimeAction":
        return TimeAction(False, Fraction(0))

    @staticmethod
    def rotation(shift) -> "TimeAction":
        return TimeAction(False, Fraction(shift))

    @staticmethod
    def reflection(axis_sum) -> "TimeAction":
        """Reflection t -> axis_sum - t (fixes axis_sum/2 and its antipode)."""
        return TimeAction(True, Fraction(axis_sum))

    @property
    def sign(self) -> int:
        return -1 if self.reflect else 1

    def apply(self, t):
        return self.sign * t + float(self.shift)

    def compose(self, other: "TimeAction") -> "TimeAction":
        # (self o other)(t) = self(other(t))
        return TimeAction(
            self.reflect != other.reflect,
            self.sign * other.shift + self.shift,
        )

    def inverse(self) -> "TimeAction":
        if self.reflect:
            return self
        return TimeAction(False, -self.shift)

    def is_identity(self) -> bool:
        return not self.reflect and self.shift == 0

    def fixes(self, t: Fraction) -> bool:
        return self.reflect and (self.shift - 2 * Fraction(t)) % 1 == 0


class GroupElement:
    """Triple (time action, permutation of bodies, orthogonal d x d matrix).

    Permutations are 0-based tuples: perm[i] is the image of body i. The
    spatial action sends q_j to mat @ q_{perm^-1(j)}.
    """

    __slots__ = ("time", "perm", "mat", "_inv_perm")

    def __init__(self, time: TimeAction, perm, mat):
        self.time = time
        self.perm = tuple(int(p) for p in perm)
        m = np.array(mat, dtype=float)
        m.setflags(write=False)
        self.mat = m
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        self._inv_perm = tuple(inv)

    @staticmethod
    def identity(n: int, d: int) -> "GroupElement":
        return GroupElement(TimeAction.identity(), range(n), np.eye(d))

    def validate(self, system: MassSystem):
        n, d = system.n, system.d
        if sorted(self.perm) != list(range(n)):
            raise InvalidGenerator(f"perm {self.perm} is not a bijection of 0..{n-1}")
        if self.mat.shape != (d, d):
            raise InvalidGenerator(f"matrix shape {self.mat.shape}, expected ({d},{d})")
        if np.max(np.abs(self.mat.T @ self.mat - np.eye(d))) > ORTHO_TOL:
            raise InvalidGenerator("matrix is not orthogonal within 1e-10")
        m = system.masses
        if np.max(np.abs(m[list(self.perm)] - m)) > 1e-12:
            raise InvalidGenerator("permutation does not preserve masses")

    def compose(self, other: "GroupElement") -> "GroupElement":
        # (g h) acts as g after h in all three slots.
        perm = tuple(self.perm[p] for p in other.perm)
        return GroupElement(
            self.time.compose(other.time), perm, self.mat @ other.mat
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.time.inverse(), self._inv_perm, self.mat.T)

    def spatial_key(self):
        return (self.perm,)

    def same_as(self, other: "GroupElement") -> bool:
        return (
            self.time == other.time
            and self.perm == other.perm
            and np.max(np.abs(self.mat - other.mat)) <= MAT_TOL
        )

    def __repr__(self):
        kind = "refl" if self.time.reflect else "rot"
        return f"GroupElement({kind} {self.time.shift}, perm={self.perm})"


def act_on_config(g: GroupElement, q: np.ndarray) -> np.ndarray:
    """Spatial part of the action: (sigma, rho) . q."""
    q = np.asarray(q, dtype=float)
    if q.shape[0] != len(g.perm) or q.shape[1] != g.mat.shape[0]:
        raise ShapeError(f"configuration shape {q.shape} does not match element")
    return q[list(g._inv_perm)] @ g.mat.T


def spatial_matrix(g: GroupElement, n: int, d: int) -> np.ndarray:
    """The nd x nd matrix of act_on_config(g, .) on flattened configurations."""
    M = np.zeros((n * d, n * d))
    for j in range(n):
        i = g._inv_perm[j]
        M[j * d : (j + 1) * d, i * d : (i + 1) * d] = g.mat
    return M


def close_group(generators, system: MassSystem, cap: int = 2000):
    """Finite closure of the generators (BFS over products).

    Returns the element list, identity first. Raises CapExceeded when the
    closure grows past ``cap`` (e.g. an irrational spatial rotation).
    """
    n, d = system.n, system.d
    for g in generators:
        g.validate(system)
    elements = [GroupElement.identity(n, d)]
    frontier = list(elements)
    gens = [g for g in generators]

    def find(e):
        for known in elements:
            if known.same_as(e):
                return True
        return False

    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                for prod in (g.compose(e), e.compose(g)):
                    if not find(prod):
                        elements.append(prod)
                        nxt.append(prod)
                        if len(elements) > cap:
                            raise CapExceeded(
                                f"group closure exceeded cap={cap}"
                            )
        frontier = nxt
    return elements


@dataclass
class SymmetryGroup:
    """A closed, classified symmetry group over a mass system.

    ``l`` is the order of the time-action image; the fundamental domain is
    [0, 1] after the T = l normalization. ``kernel`` collects the elements
    with trivial time action. Boundary data: ``r`` for cyclic type, ``h0``
    and ``h1`` for brake/dihedral (equal for brake).
    """

    system: MassSystem
    elements: list
    gtype: str
    l: int
    kernel: list
    r: GroupElement | None = None
    h0: GroupElement | None = None
    h1: GroupElement | None = None
    name: str = ""
    _kernel_proj: np.ndarray | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> GroupElement:
        return self.elements[0]


def classify(
    system: MassSystem, elements, name: str = ""
) -> SymmetryGroup:
    """Decide cyclic / brake / dihedral and extract r or (h0, h1).

    A trivial time image is accepted as "kernel-only": cyclic with l = 1
    and r = identity.
    """
    times = []
    for e in elements:
        if not any(e.time == t for t in times):
            times.append(e.time)
    l = len(times)
    kernel = [e for e in elements if e.time.is_identity()]
    if len(elements) != len(kernel) * l:
        raise ClassificationError(
            f"|G| = {len(elements)} != |kernel| * l = {len(kernel)} * {l}"
        )
    reflections = [t for t in times if t.reflect]
    if not reflections:
        if l == 1:
            return SymmetryGroup(
                system, list(elements), "cyclic", 1, kernel,
                r=elements[0], name=name,
            )
        # rotations by k/l; r is the one shifting by 1/l
        want = TimeAction.rotation(Fraction(1, l))
        r = next((e for e in elements if e.time == want), None)
        if r is None:
            raise ClassificationError(
                f"cyclic image of order {l} lacks a rotation by 1/{l}"
            )
        return SymmetryGroup(system, list(elements), "cyclic", l, kernel, r=r, name=name)
    # reflections present: brake (l = 2) or dihedral (even l > 2)
    h0 = next((e for e in elements if e.time.fixes(Fraction(0))), None)
    h1 = next((e for e in elements if e.time.fixes(Fraction(1, l))), None)
    if h0 is None or h1 is None:
        raise ClassificationError(
            "no reflection fixing the fundamental-domain boundary; "
            "shift the time origin of the generators"
        )
    if l == 2:
        return SymmetryGroup(
            system, list(elements), "brake", 2, kernel, h0=h0, h1=h0, name=name
        )
    if l % 2 != 0:
        raise ClassificationError(f"dihedral time image must have even order, got {l}")
    return SymmetryGroup(
        system, list(elements), "dihedral", l, kernel, h0=h0, h1=h1, name=name
    )


def group_from_generators(
    system: MassSystem, generators, cap: int = 2000, name: str = ""
) -> SymmetryGroup:
    return classify(system, close_group(generators, system, cap), name=name)


def trivial_group(system: MassSystem, name: str = "trivial") -> SymmetryGroup:
    return group_from_generators(system, [], name=name)


def kernel_projector(group: SymmetryGroup) -> np.ndarray:
    """Orthogonal (mass-metric) projector onto the kernel-fixed subspace.

    Acts on flattened configurations (nd vectors); average of the kernel's
    spatial matrices. Cached on the group.
    """
    if group._kernel_proj is None:
        n, d = group.system.n, group.system.d
        P = np.zeros((n * d, n * d))
        for g in group.kernel:
            P += spatial_matrix(g, n, d)
        P /= len(group.kernel)
        group._kernel_proj = P
    return group._kernel_proj


def full_spatial_projector(group: SymmetryGroup) -> np.ndarray:
    """Average of the spatial matrices over the whole group."""
    n, d = group.system.n, group.system.d
    P = np.zeros((n * d, n * d))
    for g in group.elements:
        P += spatial_matrix(g, n, d)
    return P / group.order


def centered_projector(system: MassSystem) -> np.ndarray:
    """Projector killing the common (mass-weighted) center of mass."""
    n, d = system.n, system.d
    C = np.eye(n * d)
    for a in range(d):
        cols = np.zeros(n * d)
        rows = np.zeros(n * d)
        for j in range(n):
            rows[j * d + a] = 1.0
            cols[j * d + a] = system.masses[j]
        C -= np.outer(rows, cols)
    return C


def is_coercive(group: SymmetryGroup, tol: float = 1e-8) -> bool:
    """True iff no nonzero centered configuration is fixed by all of G.

    The fixed-subspace dimension is the trace of the group-average
    projector restricted to the centered subspace.
    """
    P = full_spatial_projector(group)
    C = centered_projector(group.system)
    dim = float(np.trace(P @ C))
    return dim < tol


def boundary_involution(group: SymmetryGroup) -> np.ndarray:
    """The involution h on endpoint pairs (a0, a_end), as a 2nd x 2nd matrix.

    Cyclic: h(a0, a_end) = (r^-1 a_end, r a0); fixed points satisfy
    a_end = r . a0. Brake/dihedral: h(a0, a_end) = (h0 a0, h1 a_end).
    """
    n, d = group.system.n, group.system.d
    nd = n * d
    H = np.zeros((2 * nd, 2 * nd))
    if group.gtype == "cyclic":
        H[:nd, nd:] = spatial_matrix(group.r.inverse(), n, d)
        H[nd:, :nd] = spatial_matrix(group.r, n, d)
    else:
        H[:nd, :nd] = spatial_matrix(group.h0, n, d)
        H[nd:, nd:] = spatial_matrix(group.h1, n, d)
    return H


def boundary_projector(group: SymmetryGroup) -> np.ndarray:
    H = boundary_involution(group)
    return 0.5 * (np.eye(H.shape[0]) + H)


def segment_elements(group: SymmetryGroup):
    """Group elements mapping the fundamental domain onto each period segment.

    Segment j covers [j, j+1] in T = l units. Returns a list of
    (element, reversed) pairs: q(j + u) = (sigma, rho) q(u) for forward
    segments, q(j + u) = (sigma, rho) q(1 - u) for reversed ones.
    """
    l = group.l
    out = []
    for j in range(l):
        if group.gtype == "cyclic":
            want = TimeAction.rotation(Fraction(j, l))
            rev = False
        else:
            if j % 2 == 0:
                want = TimeAction.rotation(Fraction(j, l))
                rev = False
            else:
                want = TimeAction.reflection(Fraction(j + 1, l))
                rev = True
        g = next((e for e in group.elements if e.time == want), None)
        if g is None:
            raise ClassificationError(f"no element covers period segment {j}")
        out.append((g, rev))
    return out


# ---------------------------------------------------------------------------
# Group definition files

def _parse_spatial(entry, system: MassSystem, what: str):
    try:
        perm = [int(p) - 1 for p in entry["perm"]]
        mat = np.array(entry["mat"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGenerator(f"{what}: bad perm/mat entry: {exc}") from exc
    try:
        GroupElement(TimeAction.identity(), perm, mat).validate(system)
    except InvalidGenerator as exc:
        raise InvalidGenerator(f"{what}: {exc}") from exc
    return perm, mat


def group_from_dict(data: dict, cap: int = 2000) -> SymmetryGroup:
    """Build and validate a group from its JSON definition (see README)."""
    try:
        n = int(data["n"])
        d = int(data["d"])
        alpha = float(data.get("alpha", 1.0))
        masses = [float(m) for m in data["masses"]]
        action_type = data["action_type"]
        l = int(data["l"])
        name = data.get("name", "")
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGenerator(f"group definition: missing/bad field: {exc}") from exc
    if action_type not in ("cyclic", "brake", "dihedral"):
        raise InvalidGenerator(f"unknown action_type {action_type!r}")
    system = MassSystem(n=n, d=d, alpha=alpha, masses=np.array(masses))
    gens = []
    for i, entry in enumerate(data.get("kernel_generators", [])):
        perm, mat = _parse_spatial(entry, system, f"kernel_generators[{i}]")
        gens.append(GroupElement(TimeAction.identity(), perm, mat))
    gspec = data.get("generators", {})
    if action_type == "cyclic":
        if l > 1:
            if "r" not in gspec:
                raise InvalidGenerator("cyclic type with l > 1 requires generator 'r'")
            perm, mat = _parse_spatial(gspec["r"], system, "generators.r")
            gens.append(GroupElement(TimeAction.rotation(Fraction(1, l)), perm, mat))
    elif action_type == "brake":
        if "h0" not in gspec:
            raise InvalidGenerator("brake type requires generator 'h0'")
        perm, mat = _parse_spatial(gspec["h0"], system, "generators.h0")
        gens.append(GroupElement(TimeAction.reflection(Fraction(0)), perm, mat))
    else:
        for key in ("h0", "h1"):
            if key not in gspec:
                raise InvalidGenerator(f"dihedral type requires generator '{key}'")
        perm, mat = _parse_spatial(gspec["h0"], system, "generators.h0")
        gens.append(GroupElement(TimeAction.reflection(Fraction(0)), perm, mat))
        perm, mat = _parse_spatial(gspec["h1"], system, "generators.h1")
        gens.append(GroupElement(TimeAction.reflection(Fraction(2, l)), perm, mat))
    group = group_from_generators(system, gens, cap=cap, name=name)
    if group.gtype != action_type:
        raise InvalidGenerator(
            f"declared action_type {action_type!r} but closure classifies as "
            f"{group.gtype!r}"
        )
    if group.l != l:
        raise InvalidGenerator(f"declared l={l} but closure has l={group.l}")
    return group


def load_group_file(path, cap: int = 2000) -> SymmetryGroup:
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise InvalidGenerator(f"{path}: invalid JSON: {exc}") from exc
    return group_from_dict(data, cap=cap)
