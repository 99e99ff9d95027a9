"""Truncated tensor algebra over Q with weighted generators.

Everything downstream (Magnus expansions, necklace brackets, the bar
pairings) lives inside the completed tensor algebra
Q<<x1..xg, y1..yg, z1..zn>> truncated at a weighted degree: x and y
letters weigh 1, z letters weigh 2.  Coefficients are
fractions.Fraction; there is no floating point anywhere in this
package.

Series are sparse maps word -> coefficient, bucketed by weighted degree
so truncated products only visit compatible degree pairs.  Words are
tuples of generator names such as ("x1", "y1").  All operations return
fresh objects; nothing mutates a series after construction.
"""

from fractions import Fraction

__all__ = [
    "GenSignature",
    "TensorSeries",
    "TensorSquare",
    "Derivation",
    "AlgebraMap",
    "multiply",
    "exp",
    "log",
    "bch",
    "lie_bracket",
    "coproduct",
    "is_primitive",
    "is_group_like",
    "derivation_apply",
    "derivation_exp",
    "linear_solve",
]


def as_coeff(value):
    """Coerce an int or Fraction to Fraction; reject anything inexact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError("coefficient must be an integer or Fraction, got %r"
                    % type(value).__name__)


class GenSignature:
    """Weighted alphabet x1..xg, y1..yg (weight 1) and z1..zn (weight 2).

    The canonical generator order is x1 < ... < xg < y1 < ... < yg <
    z1 < ... < zn; series iteration and serialization sort by weighted
    degree first and this letter order second.
    """

    __slots__ = ("genus", "punctures", "gens", "_weights", "_pos")

    def __init__(self, genus, punctures):
        if genus < 0 or punctures < 0:
            raise ValueError("genus and puncture count must be nonnegative")
        self.genus = genus
        self.punctures = punctures
        gens = ["x%d" % j for j in range(1, genus + 1)]
        gens += ["y%d" % j for j in range(1, genus + 1)]
        gens += ["z%d" % k for k in range(1, punctures + 1)]
        self.gens = tuple(gens)
        self._weights = {name: (2 if name[0] == "z" else 1) for name in gens}
        self._pos = {name: i for i, name in enumerate(gens)}

    def weight(self, name):
        try:
            return self._weights[name]
        except KeyError:
            raise ValueError("unknown generator %r" % (name,)) from None

    def degree(self, word):
        w = self._weights
        try:
            return sum(w[letter] for letter in word)
        except KeyError as bad:
            raise ValueError("unknown generator %s in word" % (bad,)) from None

    def sort_key(self, word):
        pos = self._pos
        return (self.degree(word), tuple(pos[letter] for letter in word))

    def __eq__(self, other):
        return (isinstance(other, GenSignature)
                and self.genus == other.genus
                and self.punctures == other.punctures)

    def __hash__(self):
        return hash((self.genus, self.punctures))

    def __repr__(self):
        return "GenSignature(genus=%d, punctures=%d)" % (self.genus, self.punctures)


def _check_compat(a, b):
    if a.sig != b.sig or a.trunc != b.trunc:
        raise ValueError("signature/truncation mismatch: %r/%d vs %r/%d"
                         % (a.sig, a.trunc, b.sig, b.trunc))


class TensorSeries:
    """Sparse truncated series sum_w c_w * w.

    Storage: _buckets[d][word] == coeff, with d the weighted degree of
    the word; no zero coefficients are kept, no empty buckets.
    """

    __slots__ = ("sig", "trunc", "_buckets")

    def __init__(self, sig, trunc, buckets):
        # internal constructor; use the classmethods below
        self.sig = sig
        self.trunc = trunc
        self._buckets = buckets

    @classmethod
    def zero(cls, sig, trunc):
        if trunc < 1:
            raise ValueError("truncation must be >= 1")
        return cls(sig, trunc, {})

    @classmethod
    def unit(cls, sig, trunc):
        return cls.from_terms(sig, trunc, [((), 1)])

    @classmethod
    def generator(cls, sig, trunc, name):
        sig.weight(name)  # validates
        return cls.from_terms(sig, trunc, [((name,), 1)])

    @classmethod
    def from_terms(cls, sig, trunc, terms):
        """Build from (word, coeff) pairs; words past the truncation are dropped."""
        if trunc < 1:
            raise ValueError("truncation must be >= 1")
        buckets = {}
        for word, coeff in terms:
            word = tuple(word)
            coeff = as_coeff(coeff)
            if coeff == 0:
                continue
            d = sig.degree(word)
            if d > trunc:
                continue
            bucket = buckets.setdefault(d, {})
            c = bucket.get(word, 0) + coeff
            if c:
                bucket[word] = c
            elif word in bucket:
                del bucket[word]
        for d in [d for d, b in buckets.items() if not b]:
            del buckets[d]
        return cls(sig, trunc, buckets)

    # -- inspection ----------------------------------------------------

    def is_zero(self):
        return not self._buckets

    def coefficient(self, word):
        word = tuple(word)
        d = self.sig.degree(word)
        return self._buckets.get(d, {}).get(word, Fraction(0))

    def constant_term(self):
        return self._buckets.get(0, {}).get((), Fraction(0))

    def valuation(self):
        """Smallest weighted degree carrying a term, or None for the zero series."""
        if not self._buckets:
            return None
        return min(self._buckets)

    def max_degree(self):
        if not self._buckets:
            return None
        return max(self._buckets)

    def homogeneous_component(self, d):
        bucket = self._buckets.get(d)
        if not bucket:
            return TensorSeries.zero(self.sig, self.trunc)
        return TensorSeries(self.sig, self.trunc, {d: dict(bucket)})

    def items(self):
        """Unordered (word, coeff) pairs; use terms() when order matters."""
        for bucket in self._buckets.values():
            yield from bucket.items()

    def terms(self):
        """(word, coeff) pairs in degree-lexicographic order."""
        pos = self.sig._pos
        for d in sorted(self._buckets):
            bucket = self._buckets[d]
            for word in sorted(bucket, key=lambda w: tuple(pos[l] for l in w)):
                yield word, bucket[word]

    def term_count(self):
        return sum(len(b) for b in self._buckets.values())

    def truncated(self, new_trunc):
        """The same series at a lower (or equal) truncation."""
        if new_trunc > self.trunc:
            raise ValueError("cannot raise truncation from %d to %d"
                             % (self.trunc, new_trunc))
        buckets = {d: dict(b) for d, b in self._buckets.items() if d <= new_trunc}
        return TensorSeries(self.sig, new_trunc, buckets)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TensorSeries.from_terms(self.sig, self.trunc, [((), other)])
        _check_compat(self, other)
        buckets = {d: dict(b) for d, b in self._buckets.items()}
        for d, bucket in other._buckets.items():
            mine = buckets.setdefault(d, {})
            for word, coeff in bucket.items():
                c = mine.get(word, 0) + coeff
                if c:
                    mine[word] = c
                elif word in mine:
                    del mine[word]
            if not mine:
                del buckets[d]
        return TensorSeries(self.sig, self.trunc, buckets)

    __radd__ = __add__

    def __neg__(self):
        buckets = {d: {w: -c for w, c in b.items()} for d, b in self._buckets.items()}
        return TensorSeries(self.sig, self.trunc, buckets)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TensorSeries.from_terms(self.sig, self.trunc, [((), other)])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, scalar):
        scalar = as_coeff(scalar)
        if scalar == 0:
            return TensorSeries.zero(self.sig, self.trunc)
        buckets = {d: {w: c * scalar for w, c in b.items()}
                   for d, b in self._buckets.items()}
        return TensorSeries(self.sig, self.trunc, buckets)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        _check_compat(self, other)
        trunc = self.trunc
        out = {}
        for d1, b1 in self._buckets.items():
            for d2, b2 in other._buckets.items():
                d = d1 + d2
                if d > trunc:
                    continue
                tgt = out.setdefault(d, {})
                for w1, c1 in b1.items():
                    for w2, c2 in b2.items():
                        w = w1 + w2
                        c = tgt.get(w, 0) + c1 * c2
                        if c:
                            tgt[w] = c
                        elif w in tgt:
                            del tgt[w]
        for d in [d for d, b in out.items() if not b]:
            del out[d]
        return TensorSeries(self.sig, self.trunc, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return (self.sig == other.sig and self.trunc == other.trunc
                and self._buckets == other._buckets)

    def __repr__(self):
        return "<TensorSeries %s N=%d: %s>" % (self.sig, self.trunc, self.pretty(6))

    def pretty(self, max_terms=None):
        parts = []
        for word, coeff in self.terms():
            if max_terms is not None and len(parts) >= max_terms:
                parts.append("...")
                break
            name = " ".join(word) if word else "1"
            if coeff == 1 and word:
                parts.append(name)
            elif coeff == -1 and word:
                parts.append("-" + name)
            elif word:
                parts.append("%s %s" % (coeff, name))
            else:
                parts.append(str(coeff))
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return text

    # -- serialization ---------------------------------------------------

    def to_json(self):
        return {
            "signature": {"g": self.sig.genus, "n": self.sig.punctures},
            "truncation": self.trunc,
            "terms": [{"word": list(word), "coeff": str(coeff)}
                      for word, coeff in self.terms()],
        }

    @classmethod
    def from_json(cls, data):
        sig = GenSignature(data["signature"]["g"], data["signature"]["n"])
        terms = [(tuple(t["word"]), Fraction(t["coeff"])) for t in data["terms"]]
        return cls.from_terms(sig, data["truncation"], terms)


def multiply(a, b):
    """Concatenation product truncated by weighted degree."""
    return a * b


def exp(s):
    """Truncated exponential; needs vanishing constant term."""
    if s.constant_term() != 0:
        raise ValueError("exp needs a series with zero constant term")
    result = TensorSeries.unit(s.sig, s.trunc)
    term = result
    k = 1
    while k <= s.trunc:
        term = (term * s).scaled(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
        k += 1
    return result


def log(s):
    """Truncated logarithm; needs constant term 1."""
    if s.constant_term() != 1:
        raise ValueError("log needs a series with constant term 1")
    u = s - 1
    result = TensorSeries.zero(s.sig, s.trunc)
    power = TensorSeries.unit(s.sig, s.trunc)
    for k in range(1, s.trunc + 1):
        power = power * u
        if power.is_zero():
            break
        result = result + power.scaled(Fraction((-1) ** (k + 1), k))
    return result


def bch(u, v):
    """log(exp(u) exp(v)) at the shared truncation."""
    _check_compat(u, v)
    if u.constant_term() != 0 or v.constant_term() != 0:
        raise ValueError("bch needs series with zero constant term")
    return log(exp(u) * exp(v))


def lie_bracket(u, v):
    return u * v - v * u


class TensorSquare:
    """Sparse element of the doubled algebra, for coproduct checks.

    Terms are (left word, right word) -> coefficient with total weighted
    degree at most the truncation.  Just enough arithmetic for the
    primitivity and group-likeness predicates and the algebra-map
    property of the coproduct.
    """

    __slots__ = ("sig", "trunc", "terms")

    def __init__(self, sig, trunc, terms=None):
        self.sig = sig
        self.trunc = trunc
        self.terms = {}
        if terms:
            for pair, coeff in terms.items() if isinstance(terms, dict) else terms:
                self.add_term(pair[0], pair[1], coeff)

    def add_term(self, left, right, coeff):
        coeff = as_coeff(coeff)
        if coeff == 0:
            return
        left, right = tuple(left), tuple(right)
        if self.sig.degree(left) + self.sig.degree(right) > self.trunc:
            return
        key = (left, right)
        c = self.terms.get(key, 0) + coeff
        if c:
            self.terms[key] = c
        elif key in self.terms:
            del self.terms[key]

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = TensorSquare(self.sig, self.trunc, dict(self.terms))
        for (l, r), c in other.terms.items():
            out.add_term(l, r, c)
        return out

    def __sub__(self, other):
        out = TensorSquare(self.sig, self.trunc, dict(self.terms))
        for (l, r), c in other.terms.items():
            out.add_term(l, r, -c)
        return out

    def __mul__(self, other):
        # componentwise concatenation, truncated by total degree
        out = TensorSquare(self.sig, self.trunc)
        deg = self.sig.degree
        for (l1, r1), c1 in self.terms.items():
            d1 = deg(l1) + deg(r1)
            for (l2, r2), c2 in other.terms.items():
                if d1 + deg(l2) + deg(r2) > self.trunc:
                    continue
                out.add_term(l1 + l2, r1 + r2, c1 * c2)
        return out

    def __eq__(self, other):
        if not isinstance(other, TensorSquare):
            return NotImplemented
        return (self.sig == other.sig and self.trunc == other.trunc
                and self.terms == other.terms)

    @classmethod
    def left(cls, s):
        """s tensor 1."""
        out = cls(s.sig, s.trunc)
        for word, coeff in s.items():
            out.add_term(word, (), coeff)
        return out

    @classmethod
    def right(cls, s):
        """1 tensor s."""
        out = cls(s.sig, s.trunc)
        for word, coeff in s.items():
            out.add_term((), word, coeff)
        return out

    @classmethod
    def pair(cls, a, b):
        """a tensor b, truncated by total degree."""
        _check_compat(a, b)
        out = cls(a.sig, a.trunc)
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                out.add_term(w1, w2, c1 * c2)
        return out


def coproduct(s):
    """Deconcatenation-style coproduct with every generator primitive.

    On a word the coproduct distributes each letter to the left or the
    right factor, keeping relative order: Delta(w) = sum over subsets S
    of positions of w_S tensor w_{S complement}.
    """
    out = TensorSquare(s.sig, s.trunc)
    for word, coeff in s.items():
        k = len(word)
        for mask in range(1 << k):
            left = tuple(word[i] for i in range(k) if (mask >> i) & 1)
            right = tuple(word[i] for i in range(k) if not (mask >> i) & 1)
            out.add_term(left, right, coeff)
    return out


def is_primitive(s):
    return (coproduct(s) - TensorSquare.left(s) - TensorSquare.right(s)).is_zero()


def is_group_like(s):
    if s.constant_term() != 1:
        return False
    return (coproduct(s) - TensorSquare.pair(s, s)).is_zero()


class Derivation:
    """Derivation of the truncated algebra, given by generator images.

    Missing generators map to zero.  Images need not raise the weighted
    degree; see derivation_exp for the termination contract.  Truncated
    application satisfies the Leibniz rule d(st) = d(s)t + s d(t)
    exactly when no image lowers weighted degree; a degree-lowering
    derivation (the loop actions produce those) is still applied
    term by term, but its top truncation degree is then only determined
    when the input is known one degree higher.
    """

    __slots__ = ("sig", "trunc", "images")

    def __init__(self, sig, trunc, images):
        self.sig = sig
        self.trunc = trunc
        self.images = {}
        for name, image in images.items():
            sig.weight(name)
            if image.sig != sig or image.trunc != trunc:
                raise ValueError("derivation image for %s has mismatched "
                                 "signature or truncation" % name)
            if not image.is_zero():
                self.images[name] = image

    def image(self, name):
        img = self.images.get(name)
        if img is None:
            return TensorSeries.zero(self.sig, self.trunc)
        return img

    def apply(self, s):
        """Leibniz extension: d(w) = sum_i w[:i] d(w_i) w[i+1:]."""
        if s.sig != self.sig or s.trunc != self.trunc:
            raise ValueError("series does not match derivation signature/truncation")
        sig = self.sig
        trunc = self.trunc
        out = {}
        for word, coeff in s.items():
            wdeg = sig.degree(word)
            for i, letter in enumerate(word):
                img = self.images.get(letter)
                if img is None:
                    continue
                base = wdeg - sig.weight(letter)
                head, tail = word[:i], word[i + 1:]
                for d_img, bucket in img._buckets.items():
                    d = base + d_img
                    if d > trunc:
                        continue
                    tgt = out.setdefault(d, {})
                    for mid, c in bucket.items():
                        w = head + mid + tail
                        cc = tgt.get(w, 0) + coeff * c
                        if cc:
                            tgt[w] = cc
                        elif w in tgt:
                            del tgt[w]
        for d in [d for d, b in out.items() if not b]:
            del out[d]
        return TensorSeries(self.sig, self.trunc, out)

    __call__ = apply

    def __add__(self, other):
        if self.sig != other.sig or self.trunc != other.trunc:
            raise ValueError("derivation signature/truncation mismatch")
        images = dict(self.images)
        for name, img in other.images.items():
            images[name] = images[name] + img if name in images else img
        return Derivation(self.sig, self.trunc, images)

    def scaled(self, scalar):
        return Derivation(self.sig, self.trunc,
                          {name: img.scaled(scalar) for name, img in self.images.items()})


def derivation_apply(d, s):
    return d.apply(s)


class AlgebraMap:
    """Algebra endomorphism given by generator images (substitution).

    Generators without an explicit image map to themselves.  apply() is
    the multiplicative extension; word products are memoized by prefix
    so repeated substitution into big series stays affordable.
    """

    __slots__ = ("sig", "trunc", "images", "_memo")

    def __init__(self, sig, trunc, images):
        self.sig = sig
        self.trunc = trunc
        self.images = {}
        for name, image in images.items():
            sig.weight(name)
            if image.sig != sig or image.trunc != trunc:
                raise ValueError("image for %s has mismatched signature "
                                 "or truncation" % name)
            self.images[name] = image
        self._memo = {(): TensorSeries.unit(sig, trunc)}

    def image(self, name):
        img = self.images.get(name)
        if img is None:
            return TensorSeries.generator(self.sig, self.trunc, name)
        return img

    def _word_image(self, word):
        memo = self._memo
        found = memo.get(word)
        if found is not None:
            return found
        # walk back to the longest cached prefix, then extend forward
        k = len(word) - 1
        while k > 0 and word[:k] not in memo:
            k -= 1
        product = memo[word[:k]]
        for i in range(k, len(word)):
            product = product * self.image(word[i])
            memo[word[:i + 1]] = product
        return product

    def apply(self, s):
        if s.sig != self.sig or s.trunc != self.trunc:
            raise ValueError("series does not match map signature/truncation")
        acc = {}
        for word, coeff in s.items():
            for w, c in self._word_image(word).items():
                acc[w] = acc.get(w, 0) + coeff * c
        return TensorSeries.from_terms(self.sig, self.trunc, acc.items())

    __call__ = apply

    def compose(self, other):
        """self after other."""
        if self.sig != other.sig or self.trunc != other.trunc:
            raise ValueError("map signature/truncation mismatch")
        images = {name: self.apply(other.image(name)) for name in self.sig.gens}
        return AlgebraMap(self.sig, self.trunc, images)


def derivation_exp(d, max_steps=None):
    """exp of a derivation as an algebra endomorphism.

    Works whenever iterated application eventually vanishes on every
    generator at the truncation.  Degree-raising images guarantee that;
    degree-preserving parts are fine too as long as they act nilpotently
    (the Dehn-twist derivations are the motivating case).  A safety cap
    turns a non-terminating exponential into a domain error instead of
    a hang.
    """
    if max_steps is None:
        max_steps = (d.trunc + 2) * (d.trunc + 2)
    images = {}
    for name in d.sig.gens:
        total = TensorSeries.generator(d.sig, d.trunc, name)
        term = total
        k = 1
        while True:
            term = d.apply(term).scaled(Fraction(1, k))
            if term.is_zero():
                break
            if k > max_steps:
                raise ValueError("derivation exponential did not terminate; "
                                 "images are not locally nilpotent")
            total = total + term
            k += 1
        images[name] = total
    return AlgebraMap(d.sig, d.trunc, images)


def linear_solve(matrix, rhs):
    """Exact Gaussian elimination over Q.

    matrix is a list of rows of ints/Fractions, rhs the right-hand
    column.  Returns the solution with every free variable set to 0,
    or None when the system is inconsistent.  Pivoting is deterministic:
    leftmost pivot column, smallest row index.
    """
    m = len(matrix)
    if m != len(rhs):
        raise ValueError("matrix and rhs row counts differ")
    if m == 0:
        return []
    ncols = len(matrix[0])
    rows = []
    for row, b in zip(matrix, rhs):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        rows.append([as_coeff(x) for x in row] + [as_coeff(b)])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, m):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][ncols] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        solution[col] = rows[i][ncols]
    return solution
