"""Primitive Dirichlet characters.

Characters are stored as exact root-of-unity indices: ``chi(a) = exp(2 pi i
idx[a] / order)`` with ``idx[a] = -1`` marking non-units. Complex values are
derived from the index table once and cached.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .errors import CharacterError


def _factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _primitive_root(p):
    phi = p - 1
    factors = _factorize(phi)
    for g in range(2, p):
        if all(pow(g, phi // r, p) != 1 for r in factors):
            return g
    return 1  # p == 2


def _crt(residues, moduli):
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        # solve x + m*k = r (mod n)
        k = ((r - x) * pow(m, -1, n)) % n
        x += m * k
        m *= n
    return x % m


def unit_group_generators(q):
    """Generators and orders of (Z/q)^* as a product of cyclic groups.

    Returns a list of ``(generator mod q, order)``; generators are lifted from
    the prime-power components by CRT so they are independent.
    """
    if q < 1:
        raise CharacterError(f"modulus must be positive, got {q}")
    factors = sorted(_factorize(q).items())
    moduli = [p**e for p, e in factors]
    gens = []
    for i, (p, e) in enumerate(factors):
        pe = p**e
        local = []
        if p == 2:
            if e == 2:
                local.append((3, 2))
            elif e >= 3:
                local.append((pe - 1, 2))
                local.append((5, 2 ** (e - 2)))
        else:
            g = _primitive_root(p)
            # lift to a primitive root mod p^e
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            local.append((g % pe, pe - pe // p))
        for g, order in local:
            residues = [1] * len(moduli)
            residues[i] = g
            gens.append((_crt(residues, moduli), order))
    return gens


def _discrete_log_table(q, gens):
    """Map each unit a mod q to its exponent vector over ``gens``."""
    table = {}
    orders = [o for _, o in gens]
    for exps in product(*(range(o) for o in orders)):
        a = 1
        for (g, _), e in zip(gens, exps):
            a = a * pow(g, e, q) % q
        table[a] = exps
    if q == 1 or not gens:
        table = {1 % q: ()}
    return table


def _exact_root_of_unity(k, n):
    k %= n
    # exact values for orders dividing 4
    if (4 * k) % n == 0:
        return (1, 1j, -1, -1j)[(4 * k) // n]
    return cmath.exp(2j * math.pi * k / n)


@dataclass(frozen=True)
class PrimitiveCharacter:
    """A primitive, non-principal Dirichlet character mod ``q``.

    ``exponents`` picks ``chi(g_i) = e(exponents[i] / order_i)`` on the
    generators returned by :func:`unit_group_generators`. ``label`` is the
    1-based position among the primitive characters mod q.
    """

    q: int
    exponents: tuple
    label: int = 0
    _idx: tuple = field(default=(), repr=False, compare=False)
    order: int = field(default=1, compare=False)

    def __post_init__(self):
        q = self.q
        if q < 3:
            raise CharacterError(f"no primitive non-principal characters mod {q}")
        gens = unit_group_generators(q)
        if len(gens) != len(self.exponents):
            raise CharacterError("exponent vector does not match the unit group")
        orders = [o for _, o in gens]
        order = 1
        for e, o in zip(self.exponents, orders):
            order = math.lcm(order, o // math.gcd(e % o, o))
        logs = _discrete_log_table(q, gens)
        idx = [-1] * q
        for a, exps in logs.items():
            k = 0
            for e, x, o in zip(self.exponents, exps, orders):
                k += (e * x * order) // o
            idx[a] = k % order if order > 1 else 0
        object.__setattr__(self, "_idx", tuple(idx))
        object.__setattr__(self, "order", order)
        if order == 1:
            raise CharacterError(f"principal character mod {q} rejected")
        if not self._is_primitive():
            raise CharacterError(f"character {self.exponents} mod {q} is imprimitive")

    def _is_primitive(self):
        # imprimitive iff trivial on {a = 1 mod q/p} for some prime p | q
        for p in _factorize(self.q):
            d = self.q // p
            if all(self._idx[a] == 0 for a in range(1, self.q, d) if math.gcd(a, self.q) == 1):
                return False
        return True

    # -- values -------------------------------------------------------------

    def index(self, n):
        """Root-of-unity index of chi(n), or -1 if gcd(n, q) > 1."""
        return self._idx[n % self.q]

    def __call__(self, n):
        k = self._idx[n % self.q]
        if k < 0:
            return 0
        return _exact_root_of_unity(k, self.order)

    @cached_property
    def values(self):
        """Complex value table indexed by residue."""
        return np.array([self(a) for a in range(self.q)], dtype=complex)

    @cached_property
    def units(self):
        return np.array([a for a in range(1, self.q) if self._idx[a] >= 0])

    @property
    def parity(self):
        """0 for even (chi(-1) = 1), 1 for odd."""
        return 0 if self(self.q - 1) == 1 else 1

    @property
    def is_real(self):
        return self.order <= 2

    # the axioms' degree-1 data
    degree = 1

    @property
    def conductor(self):
        return self.q

    @property
    def mu(self):
        return (self.parity,)

    @cached_property
    def gauss_sum(self):
        return gauss_sum(self)

    @cached_property
    def root_number(self):
        """kappa = tau(chi) / (i^a sqrt q)."""
        return self.gauss_sum / ((1j) ** self.parity * math.sqrt(self.q))

    @cached_property
    def sqrt_root_number_inv(self):
        """Principal branch of kappa^(-1/2), fixed once per character."""
        return 1.0 / cmath.sqrt(self.root_number)

    def conjugate(self):
        gens = unit_group_generators(self.q)
        exps = tuple((-e) % o for e, (_, o) in zip(self.exponents, gens))
        for chi in enumerate_primitive_characters(self.q):
            if chi.exponents == exps:
                return chi
        raise CharacterError("conjugate not found")  # pragma: no cover

    @property
    def name(self):
        return f"chi_{self.q}.{self.label}"

    def __str__(self):
        return self.name


def gauss_sum(chi):
    """tau(chi) = sum_a chi(a) e(a/q), summed with math.fsum per component."""
    terms = [chi(a) * cmath.exp(2j * math.pi * a / chi.q) for a in range(1, chi.q)]
    return complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))


def enumerate_primitive_characters(q, strict=False):
    """All primitive characters mod ``q`` in a fixed order (labels 1, 2, ...).

    Moduli without primitive characters (q < 3, q = 2 mod 4) give an empty
    list, or raise :class:`CharacterError` when ``strict``.
    """
    if q < 3:
        if strict:
            raise CharacterError(f"modulus {q} < 3 has no primitive non-principal characters")
        return []
    gens = unit_group_generators(q)
    out = []
    for exps in product(*(range(o) for _, o in gens)):
        try:
            chi = PrimitiveCharacter(q, exps)
        except CharacterError:
            continue
        out.append(chi)
    out = [PrimitiveCharacter(q, chi.exponents, label=i + 1) for i, chi in enumerate(out)]
    if strict and not out:
        raise CharacterError(f"no primitive characters mod {q}")
    return out


def get_character(q, label):
    chars = enumerate_primitive_characters(q)
    if not 1 <= label <= len(chars):
        raise CharacterError(f"mod {q} has {len(chars)} primitive characters; label {label} invalid")
    return chars[label - 1]
