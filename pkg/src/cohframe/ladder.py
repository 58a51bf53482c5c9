"""Normal-ordered polynomials in the ladder operators.

A :class:`LadderPolynomial` stores ``H = sum c_kl a_dagger^k a^l``.  In that
form coherent-state matrix elements are closed form,

    <u| a_dagger^k a^l |v> / <u|v> = conj(u)^k v^l,

which removes Fock truncation from weak values.  The same object also
produces the truncated matrix for the Fock-space path.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import product

import numpy as np

from .fock import FockSpace, ladder_matrices

# word letters
A, AD = 0, 1


def normal_order(word):
    """Normal-order a word of ladder operators, e.g. ``(A, AD)`` for ``a a_dagger``.

    Returns ``{(k, l): coeff}`` for ``sum coeff a_dagger^k a^l``.
    """
    pending = {tuple(word): 1.0}
    done = defaultdict(float)
    while pending:
        nxt = defaultdict(float)
        for w, c in pending.items():
            for i in range(len(w) - 1):
                if w[i] == A and w[i + 1] == AD:
                    # a a_dagger = a_dagger a + 1
                    nxt[w[:i] + (AD, A) + w[i + 2 :]] += c
                    nxt[w[:i] + w[i + 2 :]] += c
                    break
            else:
                k = sum(1 for x in w if x == AD)
                done[(k, len(w) - k)] += c
        pending = {w: c for w, c in nxt.items() if c != 0}
    return {kl: c for kl, c in done.items() if c != 0}


class LadderPolynomial:
    """Hamiltonian as a normal-ordered polynomial ``sum c_kl a_dagger^k a^l``."""

    def __init__(self, coeffs, name=""):
        self.coeffs = {(int(k), int(l)): complex(c) for (k, l), c in coeffs.items() if c != 0}
        self.name = name

    def __repr__(self):
        return f"LadderPolynomial({self.name or self.coeffs!r})"

    def __add__(self, other):
        out = defaultdict(complex, self.coeffs)
        for kl, c in other.coeffs.items():
            out[kl] += c
        return LadderPolynomial(out)

    def scale(self, factor):
        return LadderPolynomial({kl: factor * c for kl, c in self.coeffs.items()}, self.name)

    @property
    def degree(self):
        return max((k + l for k, l in self.coeffs), default=0)

    def is_hermitian(self):
        return all(
            np.isclose(c, np.conj(self.coeffs.get((l, k), 0.0)), rtol=0, atol=1e-14)
            for (k, l), c in self.coeffs.items()
        )

    def matrix(self, space: FockSpace):
        """Truncated matrix ``sum c_kl (a_dagger)^k a^l`` on ``space``."""
        a, ad = ladder_matrices(space)
        out = np.zeros((space.dim, space.dim), dtype=complex)
        for (k, l), c in self.coeffs.items():
            out += c * np.linalg.matrix_power(ad, k) @ np.linalg.matrix_power(a, l)
        return out

    def weak_value(self, bra, ket):
        """``<bra|H|ket>/<bra|ket>`` for coherent labels, in closed form."""
        ub = np.conj(np.asarray(bra, dtype=complex))
        vk = np.asarray(ket, dtype=complex)
        total = np.zeros(np.broadcast(ub, vk).shape, dtype=complex)
        for (k, l), c in self.coeffs.items():
            total = total + c * ub**k * vk**l
        return total

    def expectation(self, z):
        """``<z|H|z>``."""
        return self.weak_value(z, z)

    def commutator_with_a(self):
        """``[a, H]`` as a ladder polynomial: ``[a, a_dagger^k a^l] = k a_dagger^(k-1) a^l``."""
        return LadderPolynomial({(k - 1, l): k * c for (k, l), c in self.coeffs.items() if k > 0})

    def commutator_with_ad(self):
        """``[a_dagger, H]``: ``[a_dagger, a_dagger^k a^l] = -l a_dagger^k a^(l-1)``."""
        return LadderPolynomial({(k, l - 1): -l * c for (k, l), c in self.coeffs.items() if l > 0})


def from_words(terms, name=""):
    """Build a polynomial from ``[(coeff, word), ...]`` with arbitrary operator order."""
    acc = defaultdict(complex)
    for coeff, word in terms:
        for kl, c in normal_order(word).items():
            acc[kl] += coeff * c
    return LadderPolynomial(acc, name)


def harmonic(omega=1.0, hbar=1.0):
    """``hbar omega (a_dagger a + 1/2)``."""
    return LadderPolynomial({(1, 1): hbar * omega, (0, 0): 0.5 * hbar * omega}, "harmonic")


def kerr(chi=1.0):
    """``chi (a_dagger a)^2``."""
    return from_words([(chi, (AD, A, AD, A))], "kerr")


def quartic_position(g=1.0, b=1.0):
    """``g q^4`` with ``q = b (a + a_dagger)/sqrt(2)``."""
    pref = g * b**4 / 4.0
    terms = [(pref, word) for word in product((A, AD), repeat=4)]
    return from_words(terms, "quartic")


def position(b=1.0):
    """``q = b (a + a_dagger)/sqrt(2)``."""
    s = b / np.sqrt(2.0)
    return LadderPolynomial({(0, 1): s, (1, 0): s}, "position")
