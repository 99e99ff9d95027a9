"""Combinatorial model of a compact oriented surface with boundary.

The surface of genus g with b = n+1 boundary components is carried by a
one-vertex ribbon graph: one vertex, an edge for each free-group
generator a1..ag, b1..bg, c1..cn, and a counterclockwise cyclic order
of half-edges at the vertex.  Boundary faces of the thickened graph
realize the boundary words; a marked tail half-edge in each boundary
face realizes the tangential basepoint of that boundary component.

Letters of free-group words are pairs (base, exp) with base a generator
name such as "a1" and exp +1 or -1.  The token syntax is "a1" for the
generator and "a1'" for its inverse, whitespace separated.
"""

import re

__all__ = [
    "SurfaceSpec",
    "FreeWord",
    "LoopClass",
    "Path",
    "RibbonStructure",
    "ParseError",
    "reduce",
    "cyclic_normal_form",
    "boundary_word",
    "ribbon_structure",
    "faces",
    "parse_word",
    "render_word",
]


class ParseError(ValueError):
    """Malformed word input; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class SurfaceSpec:
    """Genus and boundary count, with one basepoint tag per boundary.

    Tags are 0..n with 0 on the distinguished boundary carrying the
    surface relation word; the remaining boundaries correspond to the
    c-generators.  Rejected: closed surfaces (no boundary) and the
    disk (0,1); every other (g, b>=1) has chi <= 0 and is allowed.
    """

    __slots__ = ("genus", "boundary", "punctures")

    def __init__(self, genus, boundary):
        if genus < 0 or boundary < 0:
            raise ValueError("genus and boundary count must be nonnegative")
        if boundary == 0:
            raise ValueError("closed surfaces are not modeled; need boundary")
        if genus == 0 and boundary == 1:
            raise ValueError("the disk has no interesting loops; rejected")
        self.genus = genus
        self.boundary = boundary
        self.punctures = boundary - 1

    @property
    def tags(self):
        return tuple(range(self.boundary))

    def generators(self):
        g, n = self.genus, self.punctures
        names = ["a%d" % j for j in range(1, g + 1)]
        names += ["b%d" % j for j in range(1, g + 1)]
        names += ["c%d" % k for k in range(1, n + 1)]
        return tuple(names)

    def has_generator(self, base):
        kind, index = base[0], base[1:]
        if not index.isdigit():
            return False
        i = int(index)
        if kind in ("a", "b"):
            return 1 <= i <= self.genus
        if kind == "c":
            return 1 <= i <= self.punctures
        return False

    def validate_word(self, word):
        for base, _ in word.letters:
            if not self.has_generator(base):
                raise ValueError("letter %s is not a generator of this surface"
                                 % base)

    def __eq__(self, other):
        return (isinstance(other, SurfaceSpec)
                and self.genus == other.genus
                and self.boundary == other.boundary)

    def __hash__(self):
        return hash((self.genus, self.boundary))

    def __repr__(self):
        return "SurfaceSpec(genus=%d, boundary=%d)" % (self.genus, self.boundary)


_LETTER_ORDER = {"a": 0, "b": 1, "c": 2, "t": 3}


def letter_key(letter):
    """Fixed total order on letters: kind, index, then inverse after plain."""
    base, e = letter
    return (_LETTER_ORDER[base[0]], int(base[1:] or 0), 0 if e > 0 else 1)


def _reduce_letters(letters):
    stack = []
    for letter in letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


class FreeWord:
    """Word in the free group; kept as a tuple of (base, exp) letters.

    Construction does not reduce; call reduce() for the normal form.
    The * operator is group multiplication (concatenate and reduce).
    """

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        letters = tuple(letters)
        for letter in letters:
            if (not isinstance(letter, tuple) or len(letter) != 2
                    or letter[1] not in (1, -1)):
                raise ValueError("bad letter %r; want (base, +1/-1)" % (letter,))
        self.letters = letters

    @classmethod
    def from_generator(cls, base, exp=1):
        return cls(((base, exp),))

    def reduce(self):
        reduced = _reduce_letters(self.letters)
        return self if reduced == self.letters else FreeWord(reduced)

    def is_reduced(self):
        return _reduce_letters(self.letters) == self.letters

    def inverse(self):
        return FreeWord(tuple((base, -e) for base, e in reversed(self.letters)))

    def concat(self, other):
        return FreeWord(self.letters + other.letters)

    def __mul__(self, other):
        return FreeWord(self.letters + other.letters).reduce()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return FreeWord(self.letters * n)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return "FreeWord(%s)" % (render_word(self) or "1")

    def __str__(self):
        return render_word(self)


def reduce(word):
    """Free reduction: cancel adjacent inverse pairs until none remain."""
    return word.reduce()


class LoopClass:
    """Conjugacy class of a free-group word.

    Stored cyclically reduced in the canonical rotation: the
    lexicographically least rotation under the fixed letter order.
    """

    __slots__ = ("word",)

    def __init__(self, word):
        # callers use cyclic_normal_form; this trusts its input
        self.word = word

    def is_trivial(self):
        return not self.word

    def free_word(self):
        return FreeWord(self.word)

    def __len__(self):
        return len(self.word)

    def __eq__(self, other):
        return isinstance(other, LoopClass) and self.word == other.word

    def __hash__(self):
        return hash(("loop", self.word))

    def __repr__(self):
        return "LoopClass(%s)" % (render_word(FreeWord(self.word)) or "1")

    def __str__(self):
        return render_word(FreeWord(self.word)) or "1"


def cyclic_normal_form(word):
    """Cyclic reduction plus canonical rotation; conjugation invariant."""
    letters = list(_reduce_letters(word.letters))
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] \
            and letters[0][1] == -letters[-1][1]:
        letters = letters[1:-1]
        letters = list(_reduce_letters(letters))
    if not letters:
        return LoopClass(())
    rotations = [tuple(letters[i:] + letters[:i]) for i in range(len(letters))]
    best = min(rotations, key=lambda rot: tuple(letter_key(l) for l in rot))
    return LoopClass(best)


class Path:
    """Homotopy class of a path between tangential basepoints.

    The word expresses the path through the fixed connecting paths, so
    composition of matching tags is word concatenation.  Words are
    stored reduced.
    """

    __slots__ = ("from_tag", "to_tag", "word")

    def __init__(self, from_tag, to_tag, word=FreeWord()):
        self.from_tag = from_tag
        self.to_tag = to_tag
        self.word = word.reduce()

    def is_identity(self):
        return self.from_tag == self.to_tag and not self.word.letters

    def compose(self, other):
        if self.to_tag != other.from_tag:
            raise ValueError("cannot compose: path ends at tag %s, next "
                             "starts at %s" % (self.to_tag, other.from_tag))
        return Path(self.from_tag, other.to_tag, self.word * other.word)

    def inverse(self):
        return Path(self.to_tag, self.from_tag, self.word.inverse())

    def __eq__(self, other):
        return (isinstance(other, Path)
                and self.from_tag == other.from_tag
                and self.to_tag == other.to_tag
                and self.word == other.word)

    def __hash__(self):
        return hash((self.from_tag, self.to_tag, self.word.letters))

    def __repr__(self):
        return "Path(%s -> %s: %s)" % (self.from_tag, self.to_tag,
                                       render_word(self.word) or "1")


def boundary_word(spec):
    """The surface relation word prod [a_j, b_j] prod c_k, literally."""
    letters = []
    for j in range(1, spec.genus + 1):
        a, b = "a%d" % j, "b%d" % j
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    for k in range(1, spec.punctures + 1):
        letters.append(("c%d" % k, 1))
    return FreeWord(letters)


def dart_rev(dart):
    base, e = dart
    return (base, -e)


def _tail(tag):
    return ("t%d" % tag, 0)


class RibbonStructure:
    """One-vertex ribbon graph plus basepoint tails.

    order is the counterclockwise cyclic sequence of half-edge darts at
    the vertex.  Real darts are (base, +1/-1): the +1 dart is where the
    edge leaves the vertex when the generator is traversed positively,
    the -1 dart where it returns.  Tails ("t<k>", 0) are dangling marks
    for the basepoints and never take part in face traversal.
    """

    __slots__ = ("spec", "order", "slot")

    def __init__(self, spec, order):
        self.spec = spec
        self.order = tuple(order)
        self.slot = {dart: i for i, dart in enumerate(self.order)}

    def tail(self, tag):
        return _tail(tag)

    def real_darts_ccw(self):
        return tuple(d for d in self.order if d[1] != 0)

    def faces(self):
        """Face words of the thickened graph, one per boundary.

        Recomputed from the vertex order (the constructor's input is not
        echoed back): the face permutation sends a dart d to the
        counterclockwise predecessor of its reversal, and a face's word
        is the letter sequence of its dart cycle.  Deterministic: each
        cycle starts at its least dart, faces sorted by starting dart.
        """
        real = self.real_darts_ccw()
        position = {d: i for i, d in enumerate(real)}
        m = len(real)
        phi = {}
        for d in real:
            r = position[dart_rev(d)]
            phi[d] = real[(r - 1) % m]  # sigma^{-1} after reversal
        seen = set()
        cycles = []
        for start in sorted(real, key=letter_key):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            d = phi[start]
            while d != start:
                cycle.append(d)
                seen.add(d)
                d = phi[d]
            cycles.append(tuple(cycle))
        return [FreeWord(cycle) for cycle in cycles]

    def __repr__(self):
        return "RibbonStructure(%r, %d darts)" % (self.spec, len(self.order))


def ribbon_structure(spec):
    """The canonical ribbon graph for a surface spec.

    Faces are prescribed: face 0 spells the surface relation word as its
    dart cycle and face k is the monogon reading c_k inverse; the vertex
    order is derived from them.  The derived order must be a single
    cycle (one vertex) or the model is inconsistent for this spec.
    """
    gamma0 = boundary_word(spec)
    cycles = [tuple(gamma0.letters)]
    for k in range(1, spec.punctures + 1):
        cycles.append((("c%d" % k, -1),))
    phi_inv = {}
    for cycle in cycles:
        for i, d in enumerate(cycle):
            phi_inv[cycle[(i + 1) % len(cycle)]] = d
    darts = set(phi_inv)
    sigma = {d: dart_rev(phi_inv[d]) for d in darts}
    start = cycles[0][0]
    walk = [start]
    d = sigma[start]
    while d != start:
        walk.append(d)
        d = sigma[d]
    if len(walk) != len(darts):
        raise ValueError("derived vertex order is not a single cycle for %r"
                         % (spec,))
    insert_after = {start: [_tail(0)]}
    for k in range(1, spec.punctures + 1):
        insert_after.setdefault(("c%d" % k, -1), []).append(_tail(k))
    order = []
    for d in walk:
        order.append(d)
        order.extend(insert_after.get(d, ()))
    return RibbonStructure(spec, order)


def faces(r):
    return r.faces()


_TOKEN = re.compile(r"^([abc])([1-9][0-9]*)(')?$")


def parse_word(text):
    """Parse whitespace-separated tokens like "a1 b1 a1' b1'".

    The empty string and the token "1" both denote the identity word.
    Raises ParseError with the character position of the bad token.
    """
    if isinstance(text, (list, tuple)):
        tokens = [(t, None) for t in text]
    else:
        tokens = []
        for match in re.finditer(r"\S+", text):
            tokens.append((match.group(), match.start()))
    letters = []
    for token, pos in tokens:
        if token == "1" and len(tokens) == 1:
            return FreeWord()
        m = _TOKEN.match(token)
        if not m:
            raise ParseError("bad token %r%s; want e.g. a1 or a1'"
                             % (token, "" if pos is None else " at position %d" % pos),
                             position=pos)
        kind, index, prime = m.groups()
        letters.append((kind + index, -1 if prime else 1))
    return FreeWord(letters)


def render_word(word):
    return " ".join(base + ("" if e > 0 else "'") for base, e in word.letters)
