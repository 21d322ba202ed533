"""Colored braiding operators.

The braiding automorphism R of the doubled algebra acts on generator
slots as

    1 (x) K -> (1 (x) K) N^-1,      N = 1 - eps K^-1 E (x) F L,
    1 (x) L -> (1 (x) L) N^-1,
    E (x) 1 -> E (x) L,
    1 (x) F -> K^-1 (x) F,

and is determined on the remaining slots by R(Delta(u)) = flip(Delta(u)).
(The sign in N is forced: with a plus sign the eight images fail the
defining algebra relations, so no automorphism exists.)

On central ell-th powers R realizes the set-theoretic Yang-Baxter data
of the factorizable group: evaluating the images in the pair
(rho_y, rho_x) makes the ell-th powers of slot-1 images act by the
coordinates of x_L(x, y) and slot-2 by those of x_R(x, y), under the
identification

    K^ell -> alpha,  E^ell -> beta,  L^ell -> a,  F^ell -> -b a^-1

of central characters with Borel coordinates (the sign on F^ell is the
unique choice compatible with the minus sign in N; both twisted
identifications are Hopf homomorphisms to functions on the group).

A colored positive crossing V_x (x) V_y -> V_{x_L} (x) V_{x_R} is the
twisted intertwiner M solving

    M (P R(w) P) = (rho_{x_L} (x) rho_{x_R})(w) M

for all eight generator slots w, with R(w) evaluated in (rho_y, rho_x)
and P the tensor flip.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import factgroup
from .factgroup import Factorization, Mat2
from .uqalgebra import (CentralCharacter, CyclicRep, NonGenericCharacter,
                        RootData, build_irrep, is_generic)

NORMALIZATION_VERSION = "det1-phase-1"


class SingularN(ValueError):
    """The series factor N is not invertible for this pair."""


class NoIntertwiner(ValueError):
    """Empty solution space under the attempted branch choice."""


class AmbiguousIntertwiner(ValueError):
    """Solution space of dimension > 1; the pair is not generic enough."""


class SingularM(ValueError):
    pass


def group_to_char(g: Mat2) -> CentralCharacter:
    """The central character of a group-colored strand (twisted on F^ell)."""
    f = factgroup.factorize(g)
    alpha, beta, a, b = (complex(v) for v in f.coords())
    return CentralCharacter(alpha, beta, a, -b)


def char_to_group(char: CentralCharacter) -> Mat2:
    """Inverse of group_to_char."""
    f = Factorization(complex(char.alpha), complex(char.beta),
                      complex(char.a), -complex(char.b))
    return f.assemble()


def target_chars(x: CentralCharacter, y: CentralCharacter):
    """Characters (x_L, x_R) of the positive-crossing outputs."""
    gl, gr = factgroup.xlr(char_to_group(x), char_to_group(y))
    return group_to_char(gl), group_to_char(gr)


@dataclass(frozen=True)
class RImages:
    """Generator images of R evaluated in a fixed pair of irreps."""

    pair: tuple  # (rep_first, rep_second)
    images: dict = field(repr=False)  # slot -> ell^2 x ell^2 matrix

    SLOTS = ("K1", "L1", "E1", "F1", "K2", "L2", "E2", "F2")


def _pair_eval(ra: CyclicRep, rb: CyclicRep):
    """Evaluations of the eight generator slots in V_a (x) V_b."""
    eye_a = np.eye(ra.dim, dtype=complex)
    eye_b = np.eye(rb.dim, dtype=complex)
    out = {}
    for name, m in ra.matrices().items():
        out[name + "1"] = np.kron(m, eye_b)
    for name, m in rb.matrices().items():
        out[name + "2"] = np.kron(eye_a, m)
    return out


def r_images(rep_a: CyclicRep, rep_b: CyclicRep,
             cond_limit=1e12) -> RImages:
    """Evaluate the braiding automorphism in the pair V_a (x) V_b."""
    rd = rep_a.rd
    slot = _pair_eval(rep_a, rep_b)
    ell2 = rd.ell * rep_b.dim
    eye = np.eye(ell2, dtype=complex)
    kinv_e = np.linalg.inv(rep_a.Kmat) @ rep_a.Emat
    f_l = rep_b.Fmat @ rep_b.Lmat
    n_mat = eye - rd.eps * np.kron(kinv_e, f_l)
    if np.linalg.cond(n_mat) > cond_limit:
        raise SingularN("series factor N numerically singular")
    n_inv = np.linalg.inv(n_mat)

    img = {}
    img["K2"] = slot["K2"] @ n_inv
    img["L2"] = slot["L2"] @ n_inv
    img["E1"] = np.kron(rep_a.Emat, rep_b.Lmat)
    img["F2"] = np.kron(np.linalg.inv(rep_a.Kmat), rep_b.Fmat)
    # the rest from R(Delta(u)) = flip Delta(u)
    img["K1"] = slot["K1"] @ slot["K2"] @ np.linalg.inv(img["K2"])
    img["L1"] = slot["L1"] @ slot["L2"] @ np.linalg.inv(img["L2"])
    img["E2"] = (slot["K1"] @ slot["E2"] + slot["E1"]) - img["E1"] @ img["K2"]
    img["F1"] = (slot["F2"] + slot["F1"] @ np.linalg.inv(slot["L2"])) \
        - np.linalg.inv(img["L1"]) @ img["F2"]
    return RImages((rep_a, rep_b), img)


def automorphism_residuals(ri: RImages):
    """Residuals of the defining algebra relations among the image matrices."""
    rd = ri.pair[0].rd
    eps = rd.eps
    e2 = rd.eps_pow(2)
    img = ri.images

    def dev(m):
        return float(np.max(np.abs(m)))

    out = {}
    for suf in ("1", "2"):
        K, L = img["K" + suf], img["L" + suf]
        E, F = img["E" + suf], img["F" + suf]
        Linv = np.linalg.inv(L)
        out["KL" + suf] = dev(K @ L - L @ K)
        out["KE" + suf] = dev(K @ E - e2 * E @ K)
        out["KF" + suf] = dev(K @ F - F @ K / e2)
        out["LE" + suf] = dev(L @ E - e2 * E @ L)
        out["LF" + suf] = dev(L @ F - F @ L / e2)
        out["EF" + suf] = dev(E @ F - F @ E - (eps - 1 / eps) * (K - Linv))
    # the two slots commute elementwise
    for a in ("K1", "L1", "E1", "F1"):
        for b in ("K2", "L2", "E2", "F2"):
            out[a + b] = dev(img[a] @ img[b] - img[b] @ img[a])
    return out


def sigma_delta_residuals(ri: RImages):
    """Residuals of R(Delta(u)) = flip Delta(u) on the four generators."""
    slot = _pair_eval(*ri.pair)
    img = ri.images

    def dev(m):
        return float(np.max(np.abs(m)))

    out = {}
    out["K"] = dev(img["K1"] @ img["K2"] - slot["K1"] @ slot["K2"])
    out["L"] = dev(img["L1"] @ img["L2"] - slot["L1"] @ slot["L2"])
    out["E"] = dev(img["E1"] @ img["K2"] + img["E2"]
                   - (slot["K1"] @ slot["E2"] + slot["E1"]))
    out["F"] = dev(img["F1"] + np.linalg.inv(img["L1"]) @ img["F2"]
                   - (slot["F2"] + slot["F1"] @ np.linalg.inv(slot["L2"])))
    return out


def z0_pullback_check(x: Mat2, y: Mat2, rd: RootData):
    """Scalar actions of the eight ell-th-power images vs the group map.

    The images are evaluated in the pair (rho_y, rho_x); the ell-th power
    of each slot must be a scalar matching the coordinates of
    b(x, y) = (x_L(x, y), x_R(x, y)) coordinate-wise.
    """
    rep_a = build_irrep(group_to_char(y), (0, 0), rd)
    rep_b = build_irrep(group_to_char(x), (0, 0), rd)
    ri = r_images(rep_a, rep_b)
    gl, gr = factgroup.xlr(x, y)
    cl, cr = group_to_char(gl), group_to_char(gr)

    def coords(ch):
        return {"K": complex(ch.alpha), "E": complex(ch.beta),
                "L": complex(ch.a), "F": complex(ch.f_ell())}

    expected = {}
    for gen, val in coords(cl).items():
        expected[gen + "1"] = val
    for gen, val in coords(cr).items():
        expected[gen + "2"] = val
    ell2 = rd.ell ** 2
    report = {}
    for slotname, m in ri.images.items():
        p = np.linalg.matrix_power(m, rd.ell)
        scalar = np.trace(p) / ell2
        off = float(np.max(np.abs(p - scalar * np.eye(ell2))))
        dev = abs(scalar - expected[slotname])
        report[slotname] = {"scalar": scalar, "off_scalar": off,
                            "deviation": dev}
    report["max_off_scalar"] = max(v["off_scalar"]
                                   for v in report.values()
                                   if isinstance(v, dict))
    report["max_deviation"] = max(v["deviation"]
                                  for v in report.values()
                                  if isinstance(v, dict))
    return report


def _flip(ell):
    p = np.zeros((ell * ell, ell * ell))
    for i in range(ell):
        for j in range(ell):
            p[j * ell + i, i * ell + j] = 1.0
    return p


@dataclass(frozen=True)
class BraidingBlock:
    """The colored positive crossing V_x (x) V_y -> V_{x_L} (x) V_{x_R}."""

    matrix: np.ndarray = field(repr=False)
    source_chars: tuple
    source_branches: tuple
    target_chars: tuple  # (x_L char, x_R char)
    target_branches: tuple  # ((r,s) of x_L rep, (r,s) of x_R rep)
    nullity: int
    residual: float
    branch_retry: bool
    normalization: str = NORMALIZATION_VERSION

    def to_json(self):
        m = self.matrix
        return {
            "matrix": [[[z.real, z.imag] for z in row] for row in m.tolist()],
            "source_chars": [list(map(_cpair, c.coords()))
                             for c in self.source_chars],
            "source_branches": [list(b) for b in self.source_branches],
            "target_chars": [list(map(_cpair, c.coords()))
                             for c in self.target_chars],
            "target_branches": [list(b) for b in self.target_branches],
            "nullity": self.nullity,
            "residual": self.residual,
            "branch_retry": self.branch_retry,
            "normalization": self.normalization,
        }

    @staticmethod
    def from_json(obj):
        mat = np.array([[complex(re, im) for re, im in row]
                        for row in obj["matrix"]])
        chars = tuple(CentralCharacter(*(complex(re, im) for re, im in c))
                      for c in obj["source_chars"])
        tchars = tuple(CentralCharacter(*(complex(re, im) for re, im in c))
                       for c in obj["target_chars"])
        return BraidingBlock(
            mat, chars, tuple(tuple(b) for b in obj["source_branches"]),
            tchars, tuple(tuple(b) for b in obj["target_branches"]),
            obj["nullity"], obj["residual"], obj["branch_retry"],
            obj["normalization"])


def _cpair(z):
    z = complex(z)
    return [z.real, z.imag]


def _normalize(m):
    """Determinant one, then the distinguished phase: among the det-1
    rescalings by roots of unity, make the first entry of maximal modulus
    have the lexicographically largest (re, im)."""
    dim = m.shape[0]
    det = np.linalg.det(m)
    if abs(det) < 1e-13:
        raise SingularM("intertwiner is singular")
    m = m / det ** (1.0 / dim)
    flat = np.abs(m).ravel()
    first = int(np.argmax(flat > flat.max() - 1e-9 * flat.max()))
    pivot = m.ravel()[first]
    best = None
    for k in range(dim):
        w = np.exp(2j * np.pi * k / dim)
        z = pivot * w
        key = (round(z.real, 9), round(z.imag, 9))
        if best is None or key > best[0]:
            best = (key, w)
    return m * best[1]


def _solve_intertwiner(source_slots, target_slots, rel_tol=1e-8):
    dim = next(iter(source_slots.values())).shape[0]
    rows = []
    eye = np.eye(dim, dtype=complex)
    for name in RImages.SLOTS:
        s = source_slots[name]
        t = target_slots[name]
        rows.append(np.kron(eye, s.T) - np.kron(t, eye))
    system = np.vstack(rows)
    _, svals, vh = np.linalg.svd(system)
    cutoff = rel_tol * svals[0]
    nullity = int(np.sum(svals < cutoff))
    if nullity == 0:
        raise NoIntertwiner("no solution at this branch choice")
    vec = vh[-1].conj()
    m = vec.reshape(dim, dim)
    return m, nullity


def solve_braiding(repx: CyclicRep, repy: CyclicRep,
                   rel_tol=1e-8, retry_branches=True) -> BraidingBlock:
    """Solve for the colored positive-crossing operator.

    The source side of the intertwiner equation is the flip-conjugated
    R-image evaluated in (rho_y, rho_x); the target side is the plain
    pair evaluation in the output irreps.  Tries the principal branch
    for both targets first; on NoIntertwiner walks all branch pairs and
    records that a retry happened.
    """
    rd = repx.rd
    char_l, char_r = target_chars(repx.char, repy.char)
    for ch in (char_l, char_r):
        if not is_generic(ch, rd):
            raise NonGenericCharacter("crossing output character not generic")
    flip = _flip(rd.ell)
    ri = r_images(repy, repx)
    source_slots = {name: flip @ m @ flip for name, m in ri.images.items()}
    attempts = [(((0, 0), (0, 0)), False)]
    if retry_branches:
        others = [b for b in product(
            product(range(rd.ell), repeat=2),
            product(range(rd.ell), repeat=2)) if b != ((0, 0), (0, 0))]
        attempts += [(b, True) for b in others]
    last_exc = None
    for branches, retried in attempts:
        rep_l = build_irrep(char_l, branches[0], rd)
        rep_r = build_irrep(char_r, branches[1], rd)
        target_slots = _pair_eval(rep_l, rep_r)
        try:
            m, nullity = _solve_intertwiner(
                source_slots, target_slots, rel_tol)
            if nullity > 1:
                raise AmbiguousIntertwiner(
                    "solution space has dimension %d" % nullity)
            m = _normalize(m)
        except (NoIntertwiner, SingularM) as exc:
            last_exc = exc
            continue
        residual = 0.0
        for name in RImages.SLOTS:
            residual = max(residual, float(np.max(np.abs(
                m @ source_slots[name] - target_slots[name] @ m))))
        return BraidingBlock(
            m, (repx.char, repy.char), (repx.branch, repy.branch),
            (char_l, char_r), (rep_l.branch, rep_r.branch),
            nullity, residual, retried)
    raise last_exc or NoIntertwiner("no branch pair admits an intertwiner")


def solve_braiding_inverse(repc: CyclicRep, repd: CyclicRep,
                           rel_tol=1e-8, retry_branches=True) -> BraidingBlock:
    """Solve for the colored negative crossing V_c (x) V_d -> V_a (x) V_b.

    (a, b) is the group-level preimage of (c, d) under the crossing map.
    The positive block M for sources (a, b) satisfies M S_w = T_w M, so its
    inverse satisfies N T_w = S_w N; this solves that equation directly from
    the given source irreps, searching the (a, b) branches.
    """
    rd = repc.rd
    ga, gb = factgroup.xlr_inverse(char_to_group(repc.char),
                                   char_to_group(repd.char))
    char_a, char_b = group_to_char(ga), group_to_char(gb)
    for ch in (char_a, char_b):
        if not is_generic(ch, rd):
            raise NonGenericCharacter("crossing output character not generic")
    flip = _flip(rd.ell)
    source_slots = _pair_eval(repc, repd)
    attempts = [(((0, 0), (0, 0)), False)]
    if retry_branches:
        others = [b for b in product(
            product(range(rd.ell), repeat=2),
            product(range(rd.ell), repeat=2)) if b != ((0, 0), (0, 0))]
        attempts += [(b, True) for b in others]
    last_exc = None
    for branches, retried in attempts:
        rep_a = build_irrep(char_a, branches[0], rd)
        rep_b = build_irrep(char_b, branches[1], rd)
        ri = r_images(rep_b, rep_a)
        target_slots = {name: flip @ m @ flip for name, m in ri.images.items()}
        try:
            m, nullity = _solve_intertwiner(
                source_slots, target_slots, rel_tol)
            if nullity > 1:
                raise AmbiguousIntertwiner(
                    "solution space has dimension %d" % nullity)
            m = _normalize(m)
        except (NoIntertwiner, SingularM) as exc:
            last_exc = exc
            continue
        residual = 0.0
        for name in RImages.SLOTS:
            residual = max(residual, float(np.max(np.abs(
                m @ source_slots[name] - target_slots[name] @ m))))
        return BraidingBlock(
            m, (repc.char, repd.char), (repc.branch, repd.branch),
            (char_a, char_b), (rep_a.branch, rep_b.branch),
            nullity, residual, retried)
    raise last_exc or NoIntertwiner("no branch pair admits an intertwiner")


def braiding_inverse(blk: BraidingBlock) -> BraidingBlock:
    """The negative crossing: matrix inverse with swapped colors."""
    if abs(np.linalg.det(blk.matrix)) < 1e-13:
        raise SingularM("braiding block is singular")
    return BraidingBlock(
        np.linalg.inv(blk.matrix),
        blk.target_chars, blk.target_branches,
        blk.source_chars, blk.source_branches,
        blk.nullity, blk.residual, blk.branch_retry, blk.normalization)


def twist_mu(rep: CyclicRep, choice="K") -> np.ndarray:
    """The framing twist on V, implementing the antipode squared.

    Both K and L conjugate every generator to its antipode-squared image;
    the choice is a convention switch recorded by callers.
    """
    if choice == "K":
        return rep.Kmat.copy()
    if choice == "L":
        return rep.Lmat.copy()
    raise ValueError("twist choice must be 'K' or 'L'")


class BlockCache:
    """Directory-backed cache of solved braiding blocks."""

    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)

    @staticmethod
    def key(repx: CyclicRep, repy: CyclicRep, inverse=False):
        parts = ["ell%d" % repx.rd.ell]
        if inverse:
            parts.append("inv")
        for rep in (repx, repy):
            for re_, im_ in rep.char.rounded(12):
                parts.append("%.12g_%.12g" % (re_, im_))
            parts.append("b%d-%d" % rep.branch)
        parts.append(NORMALIZATION_VERSION)
        return "-".join(parts).replace("/", "_")

    def path(self, key):
        # keys encode two full characters and can exceed filename limits
        digest = hashlib.sha256(key.encode()).hexdigest()[:32]
        return os.path.join(self.root, "%s-%s.json" % (key[:64], digest))

    def get(self, repx, repy, inverse=False):
        p = self.path(self.key(repx, repy, inverse))
        if not os.path.exists(p):
            return None
        with open(p) as fh:
            return BraidingBlock.from_json(json.load(fh))

    def put(self, repx, repy, blk: BraidingBlock, inverse=False):
        p = self.path(self.key(repx, repy, inverse))
        tmp = p + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(blk.to_json(), fh, sort_keys=True)
        os.replace(tmp, p)

    def solve(self, repx, repy, **kw) -> BraidingBlock:
        blk = self.get(repx, repy)
        if blk is None:
            blk = solve_braiding(repx, repy, **kw)
            self.put(repx, repy, blk)
        return blk

    def solve_inverse(self, repc, repd, **kw) -> BraidingBlock:
        blk = self.get(repc, repd, inverse=True)
        if blk is None:
            blk = solve_braiding_inverse(repc, repd, **kw)
            self.put(repc, repd, blk, inverse=True)
        return blk
