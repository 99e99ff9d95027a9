"""Bar constructions over two finite surface models.

The models are cohomology-sized: an open-surface model whose letters all
sit in degree 1 with every product zero, and a closed-surface model where
dual degree-1 letters multiply to a top class. Both carry the zero
differential, so the bar differential reduces to the wedge-merge terms;
the end terms of the general formula die under the augmentation because
bar letters live in positive degree.

"Integration" of a bar word against a loop or path means coefficient
extraction through the exponential expansion of the word. The moving
basepoint evaluations (`eval_hat_cs`, `eval_hat_kk`) integrate the
partial-edge transport exactly: each edge contributes ordered-simplex
volumes, so every identity tested downstream holds in exact rational
arithmetic.
"""

from fractions import Fraction
from itertools import combinations
from math import factorial

from .magnus import default_expansion
from .surface import FreeWord, LoopClass, SurfaceSpec

_LETTER_PREFIX = {"xi": "x", "eta": "y", "zeta": "z"}


def _tensor_name(letter):
    """Map a degree-1 model letter to its expansion generator."""
    for prefix, gen in _LETTER_PREFIX.items():
        if letter.startswith(prefix) and letter[len(prefix):].isdigit():
            return gen + letter[len(prefix):]
    raise ValueError(f"letter {letter!r} does not pair with a generator")


def _base_tensor_name(base):
    # surface generator "a3" -> expansion letter "x3"
    return {"a": "x", "b": "y", "c": "z"}[base[0]] + base[1:]


class DgaModel:
    """Finite graded-commutative model with zero differential.

    `degrees` lists the positive-degree basis letters; `products` maps an
    ordered letter pair to its wedge, sparse. Wedges of total degree past
    the top are genuinely zero for a surface, not an overflow.
    """

    def __init__(self, name, degrees, products, surface=None):
        self.name = name
        self.degrees = dict(degrees)
        for letter, deg in self.degrees.items():
            if deg not in (1, 2):
                raise ValueError(f"letter {letter!r} has degree {deg}")
        self.products = {pair: dict(vals) for pair, vals in products.items()}
        self.surface = surface
        self._order = {letter: i for i, letter in enumerate(self.degrees)}

    def degree(self, letter):
        if letter not in self.degrees:
            raise ValueError(f"unknown model letter {letter!r}")
        return self.degrees[letter]

    def wedge(self, a, b):
        self.degree(a)
        self.degree(b)
        return self.products.get((a, b), {})

    def differential(self, letter):
        self.degree(letter)
        return {}

    @property
    def letters(self):
        return list(self.degrees)

    def sort_key(self, word):
        return (len(word), tuple(self._order[letter] for letter in word))

    def __eq__(self, other):
        return (isinstance(other, DgaModel) and self.name == other.name
                and self.degrees == other.degrees
                and self.products == other.products
                and self.surface == other.surface)

    def __repr__(self):
        return f"DgaModel({self.name}, {len(self.degrees)} letters)"

    def to_json(self):
        return {
            "name": self.name,
            "letters": [{"name": letter, "degree": deg}
                        for letter, deg in self.degrees.items()],
            "differential": [],
            "products": [{"left": a, "right": b,
                          "result": {c: str(v) for c, v in vals.items()}}
                         for (a, b), vals in sorted(self.products.items())],
        }


def open_model(spec):
    """Degree-1 letters of a surface with boundary; all wedges vanish."""
    if not isinstance(spec, SurfaceSpec):
        raise TypeError("open_model wants a SurfaceSpec")
    degrees = {}
    for j in range(1, spec.genus + 1):
        degrees[f"xi{j}"] = 1
    for j in range(1, spec.genus + 1):
        degrees[f"eta{j}"] = 1
    for k in range(1, spec.boundary):
        degrees[f"zeta{k}"] = 1
    return DgaModel("open", degrees, {}, surface=spec)


def closed_model(genus):
    """Letters of a closed surface: dual pairs wedge to the top class."""
    if genus < 1:
        raise ValueError("closed model needs genus >= 1")
    degrees = {}
    for j in range(1, genus + 1):
        degrees[f"xi{j}"] = 1
    for j in range(1, genus + 1):
        degrees[f"eta{j}"] = 1
    degrees["omega"] = 2
    products = {}
    for j in range(1, genus + 1):
        products[(f"xi{j}", f"eta{j}")] = {"omega": Fraction(1)}
        products[(f"eta{j}", f"xi{j}")] = {"omega": Fraction(-1)}
    return DgaModel("closed", degrees, products)


class BarElement:
    """Rational combination of bar words over a fixed model."""

    def __init__(self, model, terms=None):
        self.model = model
        self.terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for word, coeff in items:
                self.add_term(word, coeff)

    @classmethod
    def word(cls, model, letters, coeff=1):
        return cls(model, [(tuple(letters), coeff)])

    def add_term(self, word, coeff):
        word = tuple(word)
        for letter in word:
            self.model.degree(letter)
        coeff = Fraction(coeff)
        c = self.terms.get(word, Fraction(0)) + coeff
        if c:
            self.terms[word] = c
        else:
            self.terms.pop(word, None)

    def is_zero(self):
        return not self.terms

    def augmentation(self):
        return self.terms.get((), Fraction(0))

    def bar_degree(self, word):
        return sum(self.model.degree(letter) - 1 for letter in word)

    def scaled(self, scalar):
        scalar = Fraction(scalar)
        return BarElement(self.model, [(w, c * scalar)
                                       for w, c in self.terms.items()])

    def __add__(self, other):
        _check_model(self.model, other.model)
        out = BarElement(self.model, dict(self.terms))
        for word, coeff in other.terms.items():
            out.add_term(word, coeff)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __eq__(self, other):
        return (isinstance(other, BarElement) and self.model == other.model
                and self.terms == other.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda item: self.model.sort_key(item[0]))

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for word, coeff in self.sorted_terms():
            body = "[" + "|".join(word) + "]"
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff} {body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"<BarElement {self.render()}>"

    def to_json(self):
        return {"model": self.model.name,
                "terms": [{"word": list(word), "coeff": str(coeff)}
                          for word, coeff in self.sorted_terms()]}


def _check_model(a, b):
    if a != b:
        raise ValueError("bar elements live over different models")


def parse_bar(text, model):
    """Parse "[xi1|eta1]" into a one-word bar element."""
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ValueError(f"bar word must be bracketed, got {text!r}")
    inner = t[1:-1].strip()
    if not inner:
        return BarElement.word(model, ())
    letters = tuple(part.strip() for part in inner.split("|"))
    if any(not letter for letter in letters):
        raise ValueError(f"empty slot in bar word {text!r}")
    return BarElement.word(model, letters)


def bar_differential(e):
    """Wedge-merge differential of a bar combination.

    Merging positions carry the sign (-1)^i times the parity of the total
    degree left of and including the merge; with every letter in degree 1
    this is the constant -1. Internal differential terms vanish (d = 0 on
    both shipped models) and the end terms die under the augmentation.
    """
    model = e.model
    out = BarElement(model)
    for word, coeff in e.terms.items():
        degsum = 0
        for i in range(len(word) - 1):
            degsum += model.degree(word[i])
            sign = (-1) ** i * (-1) ** degsum
            for merged, value in model.wedge(word[i], word[i + 1]).items():
                out.add_term(word[:i] + (merged,) + word[i + 2:],
                             coeff * sign * value)
    return out


def shuffle_product(e1, e2):
    """Signed shuffle; Koszul signs ride on the shifted degrees."""
    _check_model(e1.model, e2.model)
    model = e1.model
    out = BarElement(model)
    for w1, c1 in e1.terms.items():
        sh1 = [model.degree(letter) - 1 for letter in w1]
        for w2, c2 in e2.terms.items():
            sh2 = [model.degree(letter) - 1 for letter in w2]
            p, q = len(w1), len(w2)
            for slots in combinations(range(p + q), p):
                merged = [None] * (p + q)
                sign = 1
                for idx, slot in enumerate(slots):
                    merged[slot] = w1[idx]
                    # w2 letters already placed before this slot
                    crossed = slot - idx
                    if sh1[idx] and sum(sh2[:crossed]) % 2:
                        sign = -sign
                rest = iter(w2)
                for slot in range(p + q):
                    if merged[slot] is None:
                        merged[slot] = next(rest)
                out.add_term(tuple(merged), c1 * c2 * sign)
    return out


_THETA_CACHE = {}


def _expansion(spec, trunc):
    key = (spec, trunc)
    if key not in _THETA_CACHE:
        _THETA_CACHE[key] = default_expansion(spec, trunc)
    return _THETA_CACHE[key]


def _word_weight(word, sig):
    return sum(sig.weight(_tensor_name(letter)) for letter in word)


def _as_word(gamma):
    if isinstance(gamma, LoopClass):
        return FreeWord(gamma.word)
    if isinstance(gamma, FreeWord):
        return gamma
    raise TypeError(f"cannot pair against {type(gamma).__name__}")


def _open_setup(e, extra_weight=0):
    model = e.model
    if model.surface is None:
        raise ValueError("pairing needs the open-surface model")
    theta = _expansion(model.surface, 1)
    sig = theta.sig
    needed = max((_word_weight(w, sig) for w in e.terms), default=0)
    return _expansion(model.surface, max(needed + extra_weight, 1))


def chen_pairing(e, gamma):
    """Pair a bar combination against a loop or path word.

    The value of [w_1|...|w_r] is the coefficient of the corresponding
    generator monomial in the expansion of the word; linear in e and
    multiplicative under the shuffle product.
    """
    theta = _open_setup(e)
    series = theta.expand_word(_as_word(gamma))
    total = Fraction(0)
    for word, coeff in e.terms.items():
        mono = tuple(_tensor_name(letter) for letter in word)
        total += coeff * series.coefficient(mono)
    return total


class ClassFunction:
    """Loop functional given by pairing against a fixed bar combination.

    Values depend only on the conjugacy class of the argument; the tests
    verify this rather than assuming it.
    """

    def __init__(self, element, source=None):
        self.element = element
        self.source = source

    def evaluate(self, loop):
        return chen_pairing(self.element, loop)

    __call__ = evaluate

    def __repr__(self):
        return f"<ClassFunction {self.element.render()}>"


def dual_cs(e, w):
    """Cyclic insertion of a degree-1 letter into a bar combination.

    Every rotation of the combined word appears once, which is what makes
    the evaluation a class function.
    """
    model = e.model
    if model.degree(w) != 1:
        raise ValueError(f"inserted letter {w!r} must have degree 1")
    out = BarElement(model)
    for word, coeff in e.terms.items():
        for j in range(len(word) + 1):
            out.add_term(word[j:] + (w,) + word[:j], coeff)
    return ClassFunction(out, source=(e, w))


def eval_hat_cs(e, w, gamma):
    """Moving-basepoint evaluation integrated exactly edge by edge.

    At a point of the p-th edge the rebased loop transports as
    exp((1-s)v) (rest of the word) exp(sv); pairing the bar word against
    that product and integrating s over [0,1] turns each split into an
    ordered-simplex volume 1/(partial+1)!. Must agree with the dual_cs
    evaluation, and the tests hold it to that exactly.
    """
    model = e.model
    if model.degree(w) != 1:
        raise ValueError(f"integrand letter {w!r} must have degree 1")
    theta = _open_setup(e)
    gamma = _as_word(gamma)
    letters = gamma.letters
    w_gen = _tensor_name(w)
    total = Fraction(0)
    for p, (base, eps) in enumerate(letters):
        if _base_tensor_name(base) != w_gen:
            continue
        rest = theta.expand_word(FreeWord(letters[p + 1:] + letters[:p]))
        for word, coeff in e.terms.items():
            mono = tuple(_tensor_name(letter) for letter in word)
            r = len(mono)
            pmax = 0
            while pmax < r and mono[pmax] == w_gen:
                pmax += 1
            smin = r
            while smin > 0 and mono[smin - 1] == w_gen:
                smin -= 1
            for j in range(pmax + 1):
                for k in range(max(j, smin), r + 1):
                    mid = rest.coefficient(mono[j:k])
                    if not mid:
                        continue
                    partial = j + (r - k)
                    total += (coeff * eps * (eps ** partial) * mid
                              * Fraction(1, factorial(partial + 1)))
    return total


def dual_kk(end0, end1, middle, model=None):
    """Assemble the relative insertion formula with its end corrections.

    `middle` is a triple (left letters, letter, right letters); the ends
    are pairs of bar elements whose contribution is weighted by the
    augmentation of the outer factor, the second with a minus sign. Pass
    None for an absent end.
    """
    left, w, right = middle
    if model is None:
        for end in (end0, end1):
            if end is not None:
                model = end[0].model
                break
    if model is None:
        raise ValueError("model needed when both ends are absent")
    if model.degree(w) != 1:
        raise ValueError(f"inserted letter {w!r} must have degree 1")
    out = BarElement.word(model, tuple(left) + (w,) + tuple(right))
    if end0 is not None:
        i0, j0 = end0
        _check_model(i0.model, model)
        _check_model(j0.model, model)
        out = out + j0.scaled(i0.augmentation())
    if end1 is not None:
        i1, j1 = end1
        _check_model(i1.model, model)
        _check_model(j1.model, model)
        out = out - i1.scaled(j1.augmentation())
    return out


def eval_hat_kk(middle, gamma, model):
    """Path evaluation of a middle triple, integrated exactly per edge.

    The left factor pairs with the path so far, the right factor with the
    path still to come; partial letters on the crossing edge integrate to
    the same ordered-simplex volumes as in eval_hat_cs. Agrees with the
    chen_pairing of the concatenated word.
    """
    left, w, right = middle
    if model.degree(w) != 1:
        raise ValueError(f"integrand letter {w!r} must have degree 1")
    probe = BarElement.word(model, tuple(left) + tuple(right))
    theta = _open_setup(probe)
    gamma = _as_word(gamma)
    letters = gamma.letters
    w_gen = _tensor_name(w)
    mono_left = tuple(_tensor_name(letter) for letter in left)
    mono_right = tuple(_tensor_name(letter) for letter in right)
    j, r = len(mono_left), len(mono_left) + len(mono_right)
    imin = j
    while imin > 0 and mono_left[imin - 1] == w_gen:
        imin -= 1
    kmax = j
    while kmax < r and mono_right[kmax - j] == w_gen:
        kmax += 1
    total = Fraction(0)
    for p, (base, eps) in enumerate(letters):
        if _base_tensor_name(base) != w_gen:
            continue
        pre = theta.expand_word(FreeWord(letters[:p]))
        suf = theta.expand_word(FreeWord(letters[p + 1:]))
        for i in range(imin, j + 1):
            c_pre = pre.coefficient(mono_left[:i])
            if not c_pre:
                continue
            for k in range(j, kmax + 1):
                c_suf = suf.coefficient(mono_right[k - j:])
                if not c_suf:
                    continue
                total += (eps * (eps ** (k - i)) * c_pre * c_suf
                          * Fraction(1, factorial(k - i + 1)))
    return total


def relation_element(model, f, letters, position):
    """Difference of the two sides of a coefficient-absorption relation.

    `f` is a scalar (the shipped models have only the unit in degree 0),
    so df = 0 kills the inserted-letter side by multilinearity, and both
    absorptions of f scale the same bar word; the difference is exactly
    zero whatever the position. Kept as a computation, not an assertion,
    so the pairing sweep can confirm it.
    """
    letters = tuple(letters)
    for letter in letters:
        model.degree(letter)
    if not 0 <= position <= len(letters):
        raise ValueError(f"position {position} outside 0..{len(letters)}")
    f = Fraction(f)
    lhs = BarElement(model)  # the word containing df = 0
    rhs = (BarElement.word(model, letters, f)
           - BarElement.word(model, letters, f))
    return lhs - rhs
