"""The quantum backend: finite direct sums of matrix algebras.

An object is a tuple of block dimensions (d1, ..., dk) standing for the
algebra  Mat(d1) + ... + Mat(dk).  A morphism is a completely positive
trace-preserving map stored blockwise as 4-index tensors T[(i, j)] with

    F(rho)_j[k, l] = sum_i T[(i,j)][k, l, a, b] * rho_i[a, b],

so composition, tensoring and the Heisenberg adjoint are einsum contractions.
Tensor and coproduct act on block lists (Kronecker / concatenation), which
makes the associator, the unit isos and the left distributivity literal
identities on this representation; the symmetry is a per-block conjugation by
the commutation permutation.  Numeric equality is Frobenius distance within
1e-9.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..triangle import Backend, BackendError, nfold

TOL = 1e-9


@dataclass
class QMor:
    dom: tuple
    cod: tuple
    blocks: dict  # (in_block, out_block) -> ndarray (e, e, d, d)


def _ident_tensor(d: int) -> np.ndarray:
    eye = np.eye(d)
    return np.einsum("ac,bd->abcd", eye, eye)


class QuantumBackend(Backend):
    name = "quantum"
    has_qbit = True

    # scalars: floats in [0,1] up to tolerance
    def s_zero(self):
        return 0.0

    def s_one(self):
        return 1.0

    def s_ovee(self, a, b):
        s = a + b
        return s if s <= 1 + TOL else None

    def s_ovee_inverse(self, a):
        return 1.0 - a

    def s_mul(self, a, b):
        return a * b

    def s_eq(self, a, b):
        return abs(a - b) <= 1e-9

    def scalar_of_fraction(self, q):
        return float(q)

    # objects
    def unit_ob(self):
        return (1,)

    def tensor_ob(self, a, b):
        return tuple(d * e for d in a for e in b)

    def sum_ob(self, a, b):
        return tuple(a) + tuple(b)

    def qbit_ob(self):
        return (2,)

    # morphisms
    def identity(self, a):
        return QMor(a, a, {(i, i): _ident_tensor(d) for i, d in enumerate(a)})

    def compose(self, g, f):
        if f.cod != g.dom:
            raise BackendError("composition domain mismatch")
        blocks = {}
        for (i, j), tf in f.blocks.items():
            for (j2, k), tg in g.blocks.items():
                if j2 != j:
                    continue
                acc = np.einsum("klmn,mnij->klij", tg, tf)
                key = (i, k)
                blocks[key] = blocks.get(key, 0) + acc
        return QMor(f.dom, g.cod, blocks)

    def tensor_mor(self, f, g):
        dom = self.tensor_ob(f.dom, g.dom)
        cod = self.tensor_ob(f.cod, g.cod)
        nb_g_in, nb_g_out = len(g.dom), len(g.cod)
        blocks = {}
        for (i1, j1), t1 in f.blocks.items():
            for (i2, j2), t2 in g.blocks.items():
                e1, d1 = t1.shape[0], t1.shape[2]
                e2, d2 = t2.shape[0], t2.shape[2]
                t = np.einsum("abcd,efgh->aebfcgdh", t1, t2).reshape(
                    e1 * e2, e1 * e2, d1 * d2, d1 * d2
                )
                blocks[(i1 * nb_g_in + i2, j1 * nb_g_out + j2)] = t
        return QMor(dom, cod, blocks)

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def symmetry(self, a, b):
        dom = self.tensor_ob(a, b)
        cod = self.tensor_ob(b, a)
        blocks = {}
        for i, d in enumerate(a):
            for j, e in enumerate(b):
                k = np.zeros((e * d, d * e))
                for x in range(d):
                    for y in range(e):
                        k[y * d + x, x * e + y] = 1.0
                blocks[(i * len(b) + j, j * len(a) + i)] = np.einsum("km,ln->klmn", k, k)
        return QMor(dom, cod, blocks)

    def assoc(self, a, b, c):
        # block dims and flat order coincide; the Kronecker product associates
        obj = self.tensor_ob(self.tensor_ob(a, b), c)
        f = self.identity(obj)
        return QMor(obj, self.tensor_ob(a, self.tensor_ob(b, c)), f.blocks)

    def assoc_inv(self, a, b, c):
        obj = self.tensor_ob(a, self.tensor_ob(b, c))
        f = self.identity(obj)
        return QMor(obj, self.tensor_ob(self.tensor_ob(a, b), c), f.blocks)

    def unit_left(self, a):
        f = self.identity(a)
        return QMor(self.tensor_ob((1,), a), a, f.blocks)

    def unit_left_inv(self, a):
        f = self.identity(a)
        return QMor(a, self.tensor_ob((1,), a), f.blocks)

    def unit_right(self, a):
        f = self.identity(a)
        return QMor(self.tensor_ob(a, (1,)), a, f.blocks)

    def unit_right_inv(self, a):
        f = self.identity(a)
        return QMor(a, self.tensor_ob(a, (1,)), f.blocks)

    def terminal(self, a):
        blocks = {}
        for i, d in enumerate(a):
            t = np.zeros((1, 1, d, d), dtype=complex)
            t[0, 0] = np.eye(d)
            blocks[(i, 0)] = t
        return QMor(a, (1,), blocks)

    def inj1(self, a, b):
        return QMor(a, self.sum_ob(a, b), {(i, i): _ident_tensor(d) for i, d in enumerate(a)})

    def inj2(self, a, b):
        off = len(a)
        return QMor(b, self.sum_ob(a, b), {(i, off + i): _ident_tensor(d) for i, d in enumerate(b)})

    def cotuple(self, f, g):
        if f.cod != g.cod:
            raise BackendError("cotuple codomain mismatch")
        dom = self.sum_ob(f.dom, g.dom)
        off = len(f.dom)
        blocks = dict(f.blocks)
        blocks.update({(off + i, j): t for (i, j), t in g.blocks.items()})
        return QMor(dom, f.cod, blocks)

    def dist_left(self, a, b, c):
        # both sides enumerate blocks in the same order with equal dims
        dom = self.tensor_ob(self.sum_ob(a, b), c)
        cod = self.sum_ob(self.tensor_ob(a, c), self.tensor_ob(b, c))
        f = self.identity(dom)
        return QMor(dom, cod, f.blocks)

    def dist_left_inv(self, a, b, c):
        dom = self.sum_ob(self.tensor_ob(a, c), self.tensor_ob(b, c))
        cod = self.tensor_ob(self.sum_ob(a, b), c)
        f = self.identity(dom)
        return QMor(dom, cod, f.blocks)

    def mor_eq(self, f, g):
        if f.dom != g.dom or f.cod != g.cod:
            return False
        keys = set(f.blocks) | set(g.blocks)
        for k in keys:
            tf = f.blocks.get(k)
            tg = g.blocks.get(k)
            if tf is None:
                tf = np.zeros_like(tg)
            if tg is None:
                tg = np.zeros_like(tf)
            if np.linalg.norm((tf - tg).ravel()) > TOL:
                return False
        return True

    # predicates: tuples of hermitian blocks with 0 <= E <= I
    def pred_zero(self, a):
        return tuple(np.zeros((d, d), dtype=complex) for d in a)

    def pred_one(self, a):
        return tuple(np.eye(d, dtype=complex) for d in a)

    def pred_ovee(self, p, q):
        s = tuple(x + y for x, y in zip(p, q))
        for blk in s:
            if np.linalg.eigvalsh(blk).max() > 1 + 1e-7:
                return None
        return s

    def pred_orth(self, a, p):
        return tuple(np.eye(d) - blk for d, blk in zip(a, p))

    def pred_smul(self, r, p):
        return tuple(float(r) * blk for blk in p)

    def pred_eq(self, p, q):
        return all(np.linalg.norm((x - y).ravel()) <= TOL for x, y in zip(p, q))

    def pred_leq(self, p, q):
        return all(np.linalg.eigvalsh(y - x).min() >= -TOL for x, y in zip(p, q))

    def apply_pred(self, f, q):
        """Heisenberg adjoint: the unique e with Tr(e rho) = Tr(q F(rho))."""
        out = []
        for i, d in enumerate(f.dom):
            acc = np.zeros((d, d), dtype=complex)
            for (i2, j), t in f.blocks.items():
                if i2 == i:
                    acc += np.einsum("banm,ab->mn", t, q[j])
            out.append(acc)
        return tuple(out)

    def pred_pair(self, a, b, p, q):
        return tuple(p) + tuple(q)

    def scalar_of_pred(self, p):
        return float(p[0][0, 0].real)

    # states: tuples of positive blocks with total trace 1
    def unit_state(self):
        return (np.array([[1.0 + 0j]]),)

    def apply_state(self, f, s):
        out = [np.zeros((e, e), dtype=complex) for e in f.cod]
        for (i, j), t in f.blocks.items():
            out[j] += np.einsum("klij,ij->kl", t, s[i])
        return tuple(out)

    def state_pair(self, a, b, s, t):
        return tuple(np.kron(x, y) for x in s for y in t)

    def validity(self, p, s):
        return float(sum(np.trace(e @ rho).real for e, rho in zip(p, s)))

    def random_state(self, a, rng):
        weights = [rng.random() for _ in a]
        total = sum(weights)
        out = []
        for d, w in zip(a, weights):
            g = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d)] for _ in range(d)])
            rho = g @ g.conj().T
            rho = rho / np.trace(rho).real * (w / total)
            out.append(rho)
        return tuple(out)

    def random_pred(self, a, rng):
        out = []
        for d in a:
            g = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d)] for _ in range(d)])
            h = g @ g.conj().T
            top = np.linalg.eigvalsh(h).max()
            scale = rng.random() / max(top, 1e-12)
            out.append(h * scale)
        return tuple(out)

    def random_channel(self, a, b, rng):
        """Random CPTP map built from a Stinespring isometry per input block,
        spread across the output blocks."""
        blocks = {}
        for i, d in enumerate(a):
            env = len(b) + 1
            iso = _random_isometry(d, sum(e * env for e in b), rng)
            offset = 0
            for j, e in enumerate(b):
                v = iso[offset : offset + e * env, :].reshape(e, env, d)
                offset += e * env
                t = np.einsum("kma,lmb->klab", v, v.conj())
                blocks[(i, j)] = t
        return QMor(a, b, blocks)

    # measurement
    def meas(self, a, preds):
        total = self.pred_zero(a)
        total = tuple(sum(p[i] for p in preds) + total[i] for i in range(len(a)))
        for d, blk in zip(a, total):
            if np.linalg.norm((blk - np.eye(d)).ravel()) > 1e-7:
                raise BackendError("measurement effects do not sum to the identity")
        n = len(preds)
        cod = nfold(self, (1,), n)
        blocks = {}
        for i, d in enumerate(a):
            for j in range(n):
                t = np.zeros((1, 1, d, d), dtype=complex)
                t[0, 0] = preds[j][i].T
                blocks[(i, j)] = t
        return QMor(a, cod, blocks)

    # qubit primitives
    def qbit_plus_prep(self):
        rho = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
        t = rho.reshape(2, 2, 1, 1)
        return QMor((1,), (2,), {(0, 0): t})

    def _unitary_channel(self, u):
        t = np.einsum("ki,lj->klij", u, u.conj())
        return QMor((u.shape[0],), (u.shape[0],), {(0, 0): t})

    def qbit_x(self):
        return self._unitary_channel(np.array([[0, 1], [1, 0]], dtype=complex))

    def qbit_z(self):
        return self._unitary_channel(np.array([[1, 0], [0, -1]], dtype=complex))

    def qbit_cz(self):
        return self._unitary_channel(np.diag([1, 1, 1, -1]).astype(complex))

    def qbit_proj(self, angle: Fraction):
        """Projector onto (|0> + e^{i a}|1>)/sqrt(2) with a = angle * pi."""
        a = math.pi * float(angle)
        ph = cmath.exp(1j * a)
        return (np.array([[0.5, 0.5 * ph.conjugate()], [0.5 * ph, 0.5]], dtype=complex),)

    # channel validation, used by tests
    def choi_blocks(self, f):
        out = {}
        for (i, j), t in f.blocks.items():
            e, d = t.shape[0], t.shape[2]
            out[(i, j)] = np.transpose(t, (2, 0, 3, 1)).reshape(d * e, d * e)
        return out

    def is_channel(self, f, tol=TOL) -> bool:
        for (i, j), c in self.choi_blocks(f).items():
            if np.linalg.eigvalsh((c + c.conj().T) / 2).min() < -1e-7:
                return False
            if np.linalg.norm((c - c.conj().T).ravel()) > 1e-7:
                return False
        for i, d in enumerate(f.dom):
            acc = np.zeros((d, d), dtype=complex)
            for (i2, j), t in f.blocks.items():
                if i2 == i:
                    acc += np.einsum("kkab->ab", t)
            if np.abs(acc - np.eye(d)).max() > 1e-7:
                return False
        return True


def _random_isometry(d, rows, rng):
    g = np.array(
        [[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d)] for _ in range(rows)]
    )
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q[:, :d] * phases.conj()
