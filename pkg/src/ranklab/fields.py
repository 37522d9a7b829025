"""Exact finite-field tower arithmetic F_q ⊆ F_{q^n} ⊆ F_{q^{nt}}.

Element representation: an element of a field of order p^d is an integer code
in [0, p^d) whose base-p digits are the coefficients over the prime field.
The packing is nested positionally, so for an extension of degree d over a
base of order B the base-B digits of the code are the base-field coefficient
codes of the reduced polynomial.  Consequences used throughout:

  * addition is digit-wise mod p (XOR when p = 2),
  * the polynomial-basis generator of an extension has code B,
  * subfield constants embed with unchanged codes.

Multiplication and inversion go through discrete-log tables for fields of
order <= 2^20; larger fields fall back to polynomial arithmetic.  Moduli are
chosen deterministically as the lexicographically least monic irreducible
polynomial over the base field (ordered by packed integer code of the
non-leading coefficients), so serialized values are portable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, InvalidParams, NotPrime, WrongLevel

LOG_TABLE_LIMIT = 1 << 20
DEFAULT_TOWER_BUDGET = 1 << 24
FROBENIUS_CHECK_LIMIT = 1 << 16
TRIAL_FACTOR_LIMIT = 1 << 12

LEVELS = ("base", "mid", "top")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m by trial division (desk-scale m)."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


_FIELD_CACHE: dict[tuple, "Field"] = {}


class Field:
    """One field in the tower: exact arithmetic on integer element codes.

    A prime field is Field(p); an extension is built with Field.extension(),
    which records the base field and the monic modulus (tuple of base codes,
    little-endian, length deg+1, leading coefficient 1).  Structurally equal
    fields are the same object (interned), so identity checks across towers
    and deserialized values are sound.
    """

    def __new__(cls, p: int):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        key = ("prime", p)
        inst = _FIELD_CACHE.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst._ready = False
            _FIELD_CACHE[key] = inst
        return inst

    def __init__(self, p: int):
        if self._ready:
            return
        self.key: tuple = ("prime", p)
        self.p = p
        self.base: Field | None = None
        self.deg = 1
        self.order = p
        self.dim_over_prime = 1
        self.modulus: tuple[int, ...] | None = None
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._frob_tables: dict[int, list[int]] = {}
        if p <= LOG_TABLE_LIMIT:
            self._build_tables()
        self._ready = True

    @classmethod
    def extension(cls, base: "Field", modulus: tuple[int, ...]) -> "Field":
        key = ("ext", base.key, tuple(modulus))
        cached = _FIELD_CACHE.get(key)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        deg = len(modulus) - 1
        if deg < 2 or modulus[-1] != 1:
            raise InvalidParams("modulus must be monic of degree >= 2")
        self.key = key
        self.p = base.p
        self.base = base
        self.deg = deg
        self.order = base.order**deg
        self.dim_over_prime = base.dim_over_prime * deg
        self.modulus = tuple(modulus)
        self._exp = None
        self._log = None
        self._frob_tables = {}
        if self.order <= LOG_TABLE_LIMIT:
            self._build_tables()
        self._ready = True
        _FIELD_CACHE[key] = self
        return self

    # -- coefficient packing ------------------------------------------------

    def vec(self, a: int) -> list[int]:
        """Base-field coefficient codes of a (length deg)."""
        if self.base is None:
            return [a]
        b, out = self.base.order, []
        for _ in range(self.deg):
            out.append(a % b)
            a //= b
        return out

    def from_vec(self, coeffs) -> int:
        if self.base is None:
            return coeffs[0] % self.p
        b, a = self.base.order, 0
        for c in reversed(coeffs):
            a = a * b + c
        return a

    def prime_vec(self, a: int) -> list[int]:
        """Coefficient vector over the prime field (length dim_over_prime)."""
        p, out = self.p, []
        for _ in range(self.dim_over_prime):
            out.append(a % p)
            a //= p
        return out

    @property
    def gen(self) -> int:
        """Polynomial-basis generator: the class of X mod the modulus."""
        if self.base is None:
            raise WrongLevel("prime field has no polynomial generator")
        return self.base.order

    # -- ring operations ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, shift = 0, 1
        while a or b:
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out, shift = 0, 1
        while a:
            d = a % p
            if d:
                out += (p - d) * shift
            a //= p
            shift *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_raw(self, a: int, b: int) -> int:
        """Polynomial multiplication with modulus reduction (no tables)."""
        if self.base is None:
            return (a * b) % self.p
        base = self.base
        av, bv = self.vec(a), self.vec(b)
        prod = [0] * (2 * self.deg - 1)
        for i, ai in enumerate(av):
            if ai == 0:
                continue
            for j, bj in enumerate(bv):
                if bj:
                    prod[i + j] = base.add(prod[i + j], base.mul(ai, bj))
        # reduce: x^deg = -(modulus minus leading term)
        mod = self.modulus
        for k in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = 0
            for j in range(self.deg):
                if mod[j]:
                    prod[k - self.deg + j] = base.sub(
                        prod[k - self.deg + j], base.mul(c, mod[j])
                    )
        return self.from_vec(prod[: self.deg])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self._exp is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        e %= self.order - 1
        r, b = 1, a
        while e:
            if e & 1:
                r = self._mul_raw(r, b)
            b = self._mul_raw(b, b)
            e >>= 1
        return r

    def elements(self):
        return range(self.order)

    def mult_order(self, a: int) -> int:
        """Order of a in the multiplicative group."""
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.order - 1
        for f in prime_factors(n):
            while n % f == 0 and self.pow(a, n // f) == 1:
                n //= f
        return n

    def _build_tables(self) -> None:
        n = self.order - 1
        if n == 0:
            self._exp, self._log = [1, 1], [0, 0]
            return
        factors = prime_factors(n)
        prim = None
        for c in range(1, self.order):
            if all(self._pow_raw(c, n // f) != 1 for f in factors):
                prim = c
                break
        exp = [1] * (2 * n)
        log = [0] * self.order
        v = 1
        for i in range(n):
            exp[i] = v
            exp[i + n] = v
            log[v] = i
            v = self._mul_raw(v, prim)
        self._exp, self._log = exp, log

    def _pow_raw(self, a: int, e: int) -> int:
        r, b = 1, a
        while e:
            if e & 1:
                r = self._mul_raw(r, b)
            b = self._mul_raw(b, b)
            e >>= 1
        return r

    def frob_table(self, q: int) -> list[int]:
        """Lookup table for x -> x^q (built lazily, order <= 2^20 only)."""
        t = self._frob_tables.get(q)
        if t is None:
            t = [self.pow(a, q) for a in range(self.order)]
            self._frob_tables[q] = t
        return t

    def __repr__(self):
        return f"Field(order={self.order})"


# -- polynomial helpers over a Field (little-endian tuples of codes) --------


def poly_trim(c: list[int]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def poly_mul(F: Field, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return poly_trim(out)


def poly_mod(F: Field, a, m):
    """a mod m with m monic."""
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1]
        if c:
            for j in range(dm):
                if m[j]:
                    a[len(a) - 1 - dm + j] = F.sub(a[len(a) - 1 - dm + j], F.mul(c, m[j]))
        a.pop()
    return poly_trim(a)


def poly_pow_mod(F: Field, a, e: int, m):
    r: tuple[int, ...] = (1,)
    b = poly_mod(F, a, m)
    while e:
        if e & 1:
            r = poly_mod(F, poly_mul(F, r, b), m)
        b = poly_mod(F, poly_mul(F, b, b), m)
        e >>= 1
    return r


def poly_gcd(F: Field, a, b):
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_mod(F, a, _monic(F, b))
        if b:
            b = poly_trim(list(b))
    if a:
        a = _monic(F, a)
    return a


def _monic(F: Field, a):
    lc = a[-1]
    if lc == 1:
        return tuple(a)
    s = F.inv(lc)
    return tuple(F.mul(s, c) for c in a)


def poly_eval(F: Field, a, x: int) -> int:
    r = 0
    for c in reversed(a):
        r = F.add(F.mul(r, x), c)
    return r


def is_irreducible(F: Field, f) -> bool:
    """Rabin irreducibility test of a monic polynomial f over F."""
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    Q = F.order
    x = (0, 1)
    # x^(Q^k) mod f by iterating the Q-power map k times
    h = x
    pows = {}
    for k in range(1, d + 1):
        h = poly_pow_mod(F, h, Q, f)
        pows[k] = h
    if poly_trim(list(_poly_sub(F, pows[d], x))):
        return False
    for r in prime_factors(d):
        # gcd(x^(Q^(d/r)) - x, f) must be trivial for every maximal proper exponent
        g = poly_gcd(F, _poly_sub(F, pows[d // r], x), f)
        if len(g) != 1:
            return False
    return True


def _poly_sub(F: Field, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out.append(F.sub(ai, bi))
    return poly_trim(out)


def least_irreducible(F: Field, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over F.

    Candidates are ordered by the packed integer code of the non-leading
    coefficient vector, which makes modulus selection reproducible.
    """
    if d == 1:
        return (0, 1)
    B = F.order
    for code in range(B**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % B)
            c //= B
        coeffs.append(1)
        if is_irreducible(F, tuple(coeffs)):
            return tuple(coeffs)
    raise InvalidParams(f"no irreducible of degree {d}")  # unreachable


def _verify_irreducible(F: Field, f) -> bool:
    """Independent check used at construction: roots, then trial factors.

    Falls back to a second Rabin run when full trial division is too large.
    """
    d = len(f) - 1
    if d == 1:
        return True
    for x in F.elements():
        if poly_eval(F, f, x) == 0:
            return False
    half = d // 2
    if F.order**half <= TRIAL_FACTOR_LIMIT:
        for deg in range(2, half + 1):
            for code in range(F.order**deg):
                coeffs = []
                c = code
                for _ in range(deg):
                    coeffs.append(c % F.order)
                    c //= F.order
                coeffs.append(1)
                if not poly_mod(F, f, tuple(coeffs)):
                    return False
        return True
    return is_irreducible(F, f)


# -- the tower ---------------------------------------------------------------


class FieldTower:
    """Immutable tower F_q ⊆ F_{q^n} ⊆ F_{q^{nt}} with q = p^e.

    The flattening basis of mid over base is (1, g, ..., g^{n-1}) with g the
    polynomial-basis generator of the mid field; all other modules rely on
    this being fixed.  Shareable across threads: all state is read-only after
    construction (frobenius tables are built lazily but idempotently).
    """

    def __init__(self, p: int, e: int, n: int, t: int, *, log_tables: bool = True,
                 budget: int = DEFAULT_TOWER_BUDGET):
        if e < 1 or n < 1 or t < 1:
            raise InvalidParams("e, n, t must be >= 1")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if log_tables and p ** (e * n * t) > budget:
            raise BudgetExceeded(p ** (e * n * t), budget, "field elements")
        self.p, self.e, self.n, self.t = p, e, n, t
        self.prime = Field(p)
        self.base = self.prime if e == 1 else Field.extension(
            self.prime, least_irreducible(self.prime, e))
        self.q = self.base.order
        self.modulus_mid = least_irreducible(self.base, n)
        self.mid = self.base if n == 1 else Field.extension(self.base, self.modulus_mid)
        self.modulus_top = least_irreducible(self.mid, t)
        self.top = self.mid if t == 1 else Field.extension(self.mid, self.modulus_top)
        self._check_construction()

    def _check_construction(self) -> None:
        for F, mod in ((self.mid, self.modulus_mid), (self.top, self.modulus_top)):
            if F.base is not None and not _verify_irreducible(F.base, mod):
                raise InvalidParams("modulus failed irreducibility verification")
        if self.mid.order <= FROBENIUS_CHECK_LIMIT:
            ft = self.mid.frob_table(self.q)
            fixed = sum(1 for a in range(self.mid.order) if ft[a] == a)
            if fixed != self.q:
                raise InvalidParams("Frobenius fixed-field check failed")

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.p, self.e, self.n, self.t)

    def field(self, level: str) -> Field:
        if level == "base":
            return self.base
        if level == "mid":
            return self.mid
        if level == "top":
            return self.top
        raise WrongLevel(f"unknown level {level!r}")

    def degree_over_base(self, level: str) -> int:
        return {"base": 1, "mid": self.n, "top": self.n * self.t}[level]

    def frob(self, level: str, a: int, s: int) -> int:
        """a^(q^s) computed in the given level's field."""
        F = self.field(level)
        s %= self.degree_over_base(level)
        if s == 0:
            return a
        if F.order <= LOG_TABLE_LIMIT:
            ft = F.frob_table(self.q)
            for _ in range(s):
                a = ft[a]
            return a
        return F.pow(a, self.q**s)

    def trace_to_base(self, level: str, a: int) -> int:
        """Tr over F_q of an element of the given level (returns a base code)."""
        d = self.degree_over_base(level)
        F = self.field(level)
        acc, x = 0, a
        for _ in range(d):
            acc = F.add(acc, x)
            x = self.frob(level, x, 1)
        if acc >= self.q:
            raise InvalidParams("trace left the base field")  # unreachable
        return acc

    def norm_to_base(self, level: str, a: int) -> int:
        """Norm over F_q: product of the q-power conjugates."""
        d = self.degree_over_base(level)
        F = self.field(level)
        acc, x = 1, a
        for _ in range(d):
            acc = F.mul(acc, x)
            x = self.frob(level, x, 1)
        if acc >= self.q:
            raise InvalidParams("norm left the base field")  # unreachable
        return acc

    def mid_to_base_vec(self, a: int) -> list[int]:
        """Coordinates of a mid element over the basis (1, g, ..., g^{n-1})."""
        if self.n == 1:
            return [a]
        return self.mid.vec(a)

    def base_vec_to_mid(self, v) -> int:
        if self.n == 1:
            return v[0]
        return self.mid.from_vec(v)

    def top_to_base_vec(self, a: int) -> list[int]:
        """Coordinates over base of a top element, mid-block major."""
        if self.t == 1:
            return self.mid_to_base_vec(a)
        out = []
        for c in self.top.vec(a):
            out.extend(self.mid_to_base_vec(c))
        return out

    def to_fe(self, level: str, code: int) -> "Fe":
        return Fe(self, level, code)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, n={self.n}, t={self.t})"


@dataclass(frozen=True, eq=False)
class Fe:
    """A field element pinned to a tower level; equality is structural."""

    tower: FieldTower
    level: str
    code: int

    def __post_init__(self):
        F = self.tower.field(self.level)
        if not 0 <= self.code < F.order:
            raise InvalidParams(f"code {self.code} out of range for {self.level}")

    @property
    def field(self) -> Field:
        return self.tower.field(self.level)

    def prime_coeffs(self) -> list[int]:
        return self.field.prime_vec(self.code)

    def __eq__(self, other):
        return (isinstance(other, Fe) and self.tower.params == other.tower.params
                and self.level == other.level and self.code == other.code)

    def __hash__(self):
        return hash((self.tower.params, self.level, self.code))


@lru_cache(maxsize=None)
def make_tower(p: int, e: int, n: int, t: int, log_tables: bool = True,
               budget: int = DEFAULT_TOWER_BUDGET) -> FieldTower:
    """Build (and cache) the tower F_{p^e} ⊆ F_{q^n} ⊆ F_{q^{nt}}."""
    return FieldTower(p, e, n, t, log_tables=log_tables, budget=budget)


def trace_to_base(x: Fe) -> Fe:
    """Tr_{q^n/q}(x) = sum of x^{q^i}, i < n; F_q-linear, lands in the base."""
    if x.level != "mid":
        raise WrongLevel("trace_to_base expects a mid-field element")
    return Fe(x.tower, "base", x.tower.trace_to_base("mid", x.code))


def frobenius(x: Fe, s: int) -> Fe:
    """x^{q^s}; s is reduced mod the extension degree of x's level."""
    return Fe(x.tower, x.level, x.tower.frob(x.level, x.code, s))


def norm_to_base(x: Fe) -> Fe:
    if x.level != "mid":
        raise WrongLevel("norm_to_base expects a mid-field element")
    return Fe(x.tower, "base", x.tower.norm_to_base("mid", x.code))


def minimal_polynomial(x: Fe) -> tuple[int, ...]:
    """Monic minimal polynomial of x over F_q, as base-field codes.

    Computed as the product of (X - conjugate) over the distinct q-power
    conjugates of x; the coefficients are asserted to land in the base field.
    """
    tower, F = x.tower, x.field
    conj, y = [], x.code
    while True:
        conj.append(y)
        y = tower.frob(x.level, y, 1)
        if y == x.code:
            break
    poly = (1,)
    for c in conj:
        poly = poly_mul(F, poly, (F.neg(c), 1))
    for c in poly:
        if c >= tower.q:
            raise InvalidParams("minimal polynomial has a coefficient outside F_q")
    return tuple(poly)
