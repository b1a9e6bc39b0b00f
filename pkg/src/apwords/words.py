"""Finite words, lazily evaluable infinite words, and their constructions.

Symbols are opaque hashable tokens (single-character strings for the base
alphabets, tuples for product alphabets, generated tokens for block
alphabets).  An Alphabet fixes a total, stable order on its symbols; every
"choose a letter" step elsewhere in the package breaks ties by this order.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from .errors import (
    AlphabetError,
    ResourceLimitError,
    SchemeError,
    SpecParseError,
)

# Finite blocks larger than this are refused rather than materialized.
MAX_BLOCK_SYMBOLS = 2 ** 25


class Alphabet:
    """An ordered finite set of distinct symbols."""

    def __init__(self, symbols):
        syms = tuple(symbols)
        if not syms:
            raise AlphabetError("alphabet must be non-empty")
        index = {}
        for i, s in enumerate(syms):
            if s in index:
                raise AlphabetError(f"duplicate symbol {s!r}")
            index[s] = i
        self._symbols = syms
        self._index = index

    @classmethod
    def from_text(cls, text):
        """Alphabet of the distinct characters of ``text``, sorted."""
        return cls(sorted(set(text)))

    @property
    def symbols(self):
        return self._symbols

    def index(self, symbol):
        try:
            return self._index[symbol]
        except KeyError:
            raise AlphabetError(f"symbol {symbol!r} not in alphabet") from None

    def __contains__(self, symbol):
        return symbol in self._index

    def __len__(self):
        return len(self._symbols)

    def __iter__(self):
        return iter(self._symbols)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self._symbols == other._symbols

    def __hash__(self):
        return hash(self._symbols)

    def __repr__(self):
        return f"Alphabet({list(self._symbols)!r})"


BINARY = Alphabet(("0", "1"))


class Word:
    """A finite string of symbols over a declared alphabet (empty allowed)."""

    __slots__ = ("alphabet", "symbols")

    def __init__(self, alphabet, symbols):
        symbols = tuple(symbols)
        for s in symbols:
            if s not in alphabet:
                raise AlphabetError(f"symbol {s!r} not in alphabet")
        self.alphabet = alphabet
        self.symbols = symbols

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.symbols[i])
        return self.symbols[i]

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.symbols == other.symbols
        return NotImplemented

    def __hash__(self):
        return hash(self.symbols)

    def __add__(self, other):
        if other.alphabet != self.alphabet:
            raise AlphabetError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.symbols + other.symbols)

    def text(self, sep=""):
        return sep.join(str(s) for s in self.symbols)

    def __repr__(self):
        return f"Word({self.text()!r})"


def word(text, alphabet=None):
    """Build a Word from a character string; the alphabet defaults to its
    sorted distinct characters."""
    if alphabet is None:
        alphabet = Alphabet.from_text(text) if text else BINARY
    return Word(alphabet, tuple(text))


def complement(w):
    """Symbol-wise swap over a two-symbol alphabet (an involution)."""
    if len(w.alphabet) != 2:
        raise AlphabetError("complement undefined: alphabet size is not 2")
    a, b = w.alphabet.symbols
    swap = {a: b, b: a}
    return Word(w.alphabet, tuple(swap[s] for s in w.symbols))


# ---------------------------------------------------------------------------
# Infinite sequences


class SequenceHandle:
    """A lazily evaluable infinite word: a pure function of index.

    ``at(i)`` must be deterministic; ``read(i, j)`` is the list of the
    individual reads.  Handles are immutable after construction and safe for
    concurrent reads.
    """

    def __init__(self, alphabet, description=""):
        self.alphabet = alphabet
        self.description = description

    def at(self, i):
        raise NotImplementedError

    def read(self, i, j):
        if i < 0 or i > j:
            raise ValueError(f"bad read range [{i}, {j}]")
        return Word(self.alphabet, self._read_symbols(i, j))

    def _read_symbols(self, i, j):
        return tuple(self.at(k) for k in range(i, j + 1))

    def suffix(self, n):
        """The handle for index -> self(n + index)."""
        if n < 0:
            raise ValueError("suffix shift must be >= 0")
        if n == 0:
            return self
        return FuncSequence(
            self.alphabet,
            lambda i: self.at(n + i),
            description=f"suffix:{n}:{self.description}",
        )

    def __repr__(self):
        return f"<{type(self).__name__} {self.description!r}>"


class FuncSequence(SequenceHandle):
    """Index-function sequence with chunked prefix memoization."""

    CHUNK = 4096

    def __init__(self, alphabet, fn, description=""):
        super().__init__(alphabet, description)
        self._fn = fn
        self._chunks = {}

    def _chunk(self, c):
        chunk = self._chunks.get(c)
        if chunk is None:
            base = c * self.CHUNK
            fn = self._fn
            chunk = [fn(base + k) for k in range(self.CHUNK)]
            # idempotent fill: concurrent writers produce identical chunks
            self._chunks[c] = chunk
        return chunk

    def at(self, i):
        return self._chunk(i // self.CHUNK)[i % self.CHUNK]

    def _read_symbols(self, i, j):
        out = []
        c = i // self.CHUNK
        while c * self.CHUNK <= j:
            chunk = self._chunk(c)
            lo = max(i - c * self.CHUNK, 0)
            hi = min(j - c * self.CHUNK, self.CHUNK - 1)
            out.extend(chunk[lo:hi + 1])
            c += 1
        return tuple(out)


class StreamSequence(SequenceHandle):
    """Sequence backed by a single generator, buffered as it is consumed.

    The generator may be finite; reads past its end raise FiniteOutputError
    lazily.  Buffer fills are serialized so concurrent reads are safe.
    """

    def __init__(self, alphabet, iterator, description=""):
        super().__init__(alphabet, description)
        self._it = iter(iterator)
        self._buf = []
        self._done = False
        self._lock = threading.Lock()

    def _ensure(self, n):
        if len(self._buf) > n:
            return
        with self._lock:
            while len(self._buf) <= n and not self._done:
                try:
                    self._buf.append(next(self._it))
                except StopIteration:
                    self._done = True
        if len(self._buf) <= n:
            from .errors import FiniteOutputError

            raise FiniteOutputError(len(self._buf))

    def at(self, i):
        self._ensure(i)
        return self._buf[i]

    def _read_symbols(self, i, j):
        self._ensure(j)
        return tuple(self._buf[i:j + 1])


def read(seq, i, j):
    """seq(i) ... seq(j) as a Word."""
    return seq.read(i, j)


def product(seq_a, seq_b):
    """Componentwise pairing: index -> (a(i), b(i)) over the product alphabet."""
    alphabet = Alphabet(
        tuple(itertools.product(seq_a.alphabet.symbols, seq_b.alphabet.symbols))
    )
    return FuncSequence(
        alphabet,
        lambda i: (seq_a.at(i), seq_b.at(i)),
        description=f"product:{seq_a.description},{seq_b.description}",
    )


def projections(seq):
    """The two coordinate sequences of a product-alphabet sequence."""
    firsts, seconds = [], []
    for a, b in seq.alphabet.symbols:
        if a not in firsts:
            firsts.append(a)
        if b not in seconds:
            seconds.append(b)
    left = FuncSequence(Alphabet(firsts), lambda i: seq.at(i)[0])
    right = FuncSequence(Alphabet(seconds), lambda i: seq.at(i)[1])
    return left, right


def periodic(w):
    """The periodic sequence w w w ..."""
    if isinstance(w, str):
        w = word(w)
    if len(w) == 0:
        raise ValueError("period word must be non-empty")
    syms, p = w.symbols, len(w)
    return FuncSequence(
        w.alphabet, lambda i: syms[i % p], description=f"periodic:{w.text()}"
    )


def prepend(w, seq):
    """The sequence w(0) ... w(k-1) seq(0) seq(1) ..."""
    if isinstance(w, str):
        w = word(w, seq.alphabet)
    for s in w.symbols:
        if s not in seq.alphabet:
            raise AlphabetError(f"prepended symbol {s!r} not in sequence alphabet")
    k, syms = len(w), w.symbols
    return FuncSequence(
        seq.alphabet,
        lambda i: syms[i] if i < k else seq.at(i - k),
        description=f"prepend:{w.text()}:{seq.description}",
    )


# ---------------------------------------------------------------------------
# Thue-Morse


def thue_morse():
    """The Thue-Morse sequence 0110100110010110... over {0,1}."""
    return FuncSequence(
        BINARY,
        lambda i: "1" if bin(i).count("1") % 2 else "0",
        description="tm",
    )


def tm_block(n, max_len=MAX_BLOCK_SYMBOLS):
    """Doubling block: block(0) = 0, block(n+1) = block(n) + its complement."""
    if n < 0:
        raise ValueError("level must be >= 0")
    if 2 ** n > max_len:
        raise ResourceLimitError(f"block of length 2^{n} exceeds limit {max_len}")
    s = "0"
    flip = str.maketrans("01", "10")
    for _ in range(n):
        s += s.translate(flip)
    return word(s, BINARY)


# ---------------------------------------------------------------------------
# The quintuple blocks a_n and the sequences built from them


def thm21_block(n, max_len=MAX_BLOCK_SYMBOLS):
    """Quintuple block: a_0 = 1, a_{n+1} = a ~a ~a a a; length 5^n."""
    if n < 0:
        raise ValueError("level must be >= 0")
    if 5 ** n > max_len:
        raise ResourceLimitError(f"block of length 5^{n} exceeds limit {max_len}")
    s = "1"
    flip = str.maketrans("01", "10")
    for _ in range(n):
        t = s.translate(flip)
        s = s + t + t + s + s
    return word(s, BINARY)


def _quintuple_letter(n, j):
    """Letter j of the level-n quintuple block, computed by digit descent."""
    flips = 0
    for _ in range(n):
        if j % 5 in (1, 2):
            flips ^= 1
        j //= 5
    return "0" if flips else "1"


@dataclass(frozen=True)
class TauSpec:
    """Eventually-periodic repetition counts in {4,5} (the pattern repeats)."""

    pattern: tuple

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("tau pattern must be non-empty")
        if any(v not in (4, 5) for v in self.pattern):
            raise ValueError("tau values must be in {4, 5}")

    def count(self, n):
        return self.pattern[n % len(self.pattern)]


class _QuintupleConcat(SequenceHandle):
    """c_0 c_1 c_2 ... where c_n is the level-n quintuple block repeated
    tau(n) times (tau constant 4 gives the plain variant)."""

    def __init__(self, tau, description):
        super().__init__(BINARY, description)
        self._tau = tau
        self._bounds = [0]  # cumulative lengths of c_0 ... c_{n-1}

    def _level_for(self, i):
        bounds = self._bounds
        while bounds[-1] <= i:
            n = len(bounds) - 1
            bounds.append(bounds[-1] + self._tau.count(n) * 5 ** n)
        lo, hi = 0, len(bounds) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if bounds[mid] <= i:
                lo = mid
            else:
                hi = mid
        return lo

    def at(self, i):
        n = self._level_for(i)
        p = i - self._bounds[n]
        return _quintuple_letter(n, p % 5 ** n)


def thm21():
    """The pasted sequence c_0 c_1 c_2 ... with c_n = a_n a_n a_n a_n."""
    return _QuintupleConcat(TauSpec((4,)), "thm21")


def thm21_tau(tau):
    """Variant with c_n repeated tau(n) times, tau eventually periodic."""
    if not isinstance(tau, TauSpec):
        tau = TauSpec(tuple(tau))
    return _QuintupleConcat(tau, "thm21tau:" + "".join(str(v) for v in tau.pattern))


def quintuple_limit():
    """The fixed point lim a_n of the quintuple blocks (a uniformly
    recurrent sequence; also reachable as a scheme fixed point)."""
    return FuncSequence(BINARY, lambda i: _quintuple_letter_unbounded(i))


def _quintuple_letter_unbounded(i):
    flips = 0
    while i:
        if i % 5 in (1, 2):
            flips ^= 1
        i //= 5
    return "0" if flips else "1"


def tm_triple_fixture(n):
    """block block block + Thue-Morse, the moving-prefix counterexample family."""
    b = tm_block(n)
    w = Word(BINARY, b.symbols * 3)
    seq = prepend(w, thue_morse())
    seq.description = f"fixture:tm-triple:{n}"
    return seq


# ---------------------------------------------------------------------------
# Uniform substitution schemes


@dataclass(frozen=True)
class SchemeSpec:
    """Uniform substitution with a self-prefixing start label.

    Structural requirements (checked here): all images have the same length
    k >= 2 over the label alphabet, decode is total, and the start label's
    image begins with the start label.  The recurrence conditions (every
    label in every image; adjacent pairs) are checked by scheme_validate.
    """

    labels: Alphabet
    rules: dict = field(compare=False)
    decode: dict = field(compare=False)
    start: object = None

    def __post_init__(self):
        lengths = set()
        for lab in self.labels:
            if lab not in self.rules:
                raise SchemeError(f"no rule for label {lab!r}")
            image = self.rules[lab]
            lengths.add(len(image))
            for s in image:
                if s not in self.labels:
                    raise SchemeError(f"rule image symbol {s!r} is not a label")
            if lab not in self.decode:
                raise SchemeError(f"no decode entry for label {lab!r}")
        if len(lengths) != 1:
            raise SchemeError("rule images must all have the same length")
        k = lengths.pop()
        if k < 2:
            raise SchemeError("rule images must have length >= 2")
        if self.start not in self.labels:
            raise SchemeError("start label missing from label alphabet")
        if self.rules[self.start][0] != self.start:
            raise SchemeError("start label's image must begin with the start label")

    @property
    def block_length(self):
        return len(self.rules[self.start])

    def base_alphabet(self):
        seen = []
        for lab in self.labels:
            v = self.decode[lab]
            if v not in seen:
                seen.append(v)
        return Alphabet(seen)


@dataclass(frozen=True)
class SchemeVerdict:
    basic_ok: bool
    strengthened_ok: object  # bool, or None when not requested
    failures: tuple

    @property
    def ok(self):
        if not self.basic_ok:
            return False
        return self.strengthened_ok is not False


def scheme_validate(spec, strengthened=False):
    """Check the recurrence conditions of a scheme.

    Basic: every label occurs in every image.  Strengthened: every ordered
    label pair occurs adjacently in every image (exhaustive enumeration).
    """
    failures = []
    labels = tuple(spec.labels)
    for lab in labels:
        image = spec.rules[lab]
        for w in labels:
            if w not in image:
                failures.append(f"label {w!r} missing from image of {lab!r}")
    basic_ok = not failures
    strengthened_ok = None
    if strengthened:
        strengthened_ok = True
        for lab in labels:
            image = tuple(spec.rules[lab])
            pairs = set(zip(image, image[1:]))
            for w1 in labels:
                for w2 in labels:
                    if (w1, w2) not in pairs:
                        failures.append(
                            f"pair {w1!r}{w2!r} not adjacent in image of {lab!r}"
                        )
                        strengthened_ok = False
    return SchemeVerdict(basic_ok, strengthened_ok, tuple(failures))


def scheme_generate(spec):
    """The decoded fixed point of iterating the rules from the start label.

    Index i is resolved by descending the base-k digit tree, so a single
    read costs O(log i).
    """
    verdict = scheme_validate(spec)
    if not verdict.basic_ok:
        raise SchemeError("scheme rejected: " + "; ".join(verdict.failures))
    k = spec.block_length
    rules = {lab: tuple(img) for lab, img in spec.rules.items()}
    decode = spec.decode
    start = spec.start

    def at(i):
        digits = []
        while i:
            digits.append(i % k)
            i //= k
        lab = start
        for d in reversed(digits):
            lab = rules[lab][d]
        return decode[lab]

    return FuncSequence(spec.base_alphabet(), at, description="scheme")


def parse_scheme_file(path):
    """Parse th line-based scheme format.

    Stanzas: ``labels A B``, ``start A``, ``rule A A B``, ``decode A 0``.
    Blank lines and ``#`` comments are ignored.
    """
    labels = None
    start = None
    rules = {}
    decode = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kind = parts[0]
            if kind == "labels":
                labels = Alphabet(parts[1:])
            elif kind == "start":
                if len(parts) != 2:
                    raise SchemeError(f"{path}:{lineno}: start takes one label")
                start = parts[1]
            elif kind == "rule":
                if len(parts) < 3:
                    raise SchemeError(f"{path}:{lineno}: rule needs an image")
                rules[parts[1]] = tuple(parts[2:])
            elif kind == "decode":
                if len(parts) != 3:
                    raise SchemeError(f"{path}:{lineno}: decode takes label and symbol")
                decode[parts[1]] = parts[2]
            else:
                raise SchemeError(f"{path}:{lineno}: unknown stanza {kind!r}")
    if labels is None:
        raise SchemeError(f"{path}: missing labels stanza")
    return SchemeSpec(labels=labels, rules=rules, decode=decode, start=start)


# ---------------------------------------------------------------------------
# Sequence-spec mini-language


@dataclass(frozen=True)
class SpecNode:
    """Parsed node of the sequence-spec mini-language."""

    kind: str
    args: tuple = ()
    children: tuple = ()

    def text(self):
        if self.kind in ("tm", "thm21"):
            return self.kind
        if self.kind == "periodic":
            return f"periodic:{self.args[0]}"
        if self.kind == "thm21tau":
            return f"thm21tau:{self.args[0]}"
        if self.kind == "prepend":
            return f"prepend:{self.args[0]}:{self.children[0].text()}"
        if self.kind == "suffix":
            return f"suffix:{self.args[0]}:{self.children[0].text()}"
        if self.kind == "product":
            return f"product:{self.children[0].text()},{self.children[1].text()}"
        if self.kind == "scheme":
            return f"scheme:{self.args[0]}"
        if self.kind == "fixture":
            return f"fixture:tm-triple:{self.args[0]}"
        raise ValueError(f"unknown node kind {self.kind!r}")


def _take_token(text, pos, stop=":,"):
    end = pos
    while end < len(text) and text[end] not in stop:
        end += 1
    if end == pos:
        raise SpecParseError("expected a token", pos)
    return text[pos:end], end


def _expect(text, pos, ch):
    if pos >= len(text) or text[pos] != ch:
        raise SpecParseError(f"expected {ch!r}", pos)
    return pos + 1


def _parse_int(text, pos):
    token, end = _take_token(text, pos)
    if not token.isdigit():
        raise SpecParseError(f"expected a number, got {token!r}", pos)
    return int(token), end


def _parse_node(text, pos):
    name, end = _take_token(text, pos)
    if name == "tm":
        return SpecNode("tm"), end
    if name == "thm21":
        return SpecNode("thm21"), end
    if name == "periodic":
        end = _expect(text, end, ":")
        w, end = _take_token(text, end)
        return SpecNode("periodic", (w,)), end
    if name == "thm21tau":
        end = _expect(text, end, ":")
        digits, end = _take_token(text, end)
        if any(c not in "45" for c in digits):
            raise SpecParseError("tau digits must be 4 or 5", end - len(digits))
        return SpecNode("thm21tau", (digits,)), end
    if name == "prepend":
        end = _expect(text, end, ":")
        w, end = _take_token(text, end)
        end = _expect(text, end, ":")
        child, end = _parse_node(text, end)
        return SpecNode("prepend", (w,), (child,)), end
    if name == "suffix":
        end = _expect(text, end, ":")
        n, end = _parse_int(text, end)
        end = _expect(text, end, ":")
        child, end = _parse_node(text, end)
        return SpecNode("suffix", (n,), (child,)), end
    if name == "product":
        end = _expect(text, end, ":")
        left, end = _parse_node(text, end)
        end = _expect(text, end, ",")
        right, end = _parse_node(text, end)
        return SpecNode("product", (), (left, right)), end
    if name == "scheme":
        end = _expect(text, end, ":")
        path, end = _take_token(text, end, stop=",")
        return SpecNode("scheme", (path,)), end
    if name == "fixture":
        end = _expect(text, end, ":")
        family, end = _take_token(text, end)
        if family != "tm-triple":
            raise SpecParseError(f"unknown fixture family {family!r}", end - len(family))
        end = _expect(text, end, ":")
        n, end = _parse_int(text, end)
        return SpecNode("fixture", (n,)), end
    raise SpecParseError(f"unknown construction {name!r}", pos)


def parse_spec(text):
    """Parse a sequence-spec string into its construction tree."""
    node, pos = _parse_node(text, 0)
    if pos != len(text):
        raise SpecParseError("trailing input", pos)
    return node


def build_sequence(node):
    """Materialize a SequenceHandle from a parsed construction tree."""
    if node.kind == "tm":
        return thue_morse()
    if node.kind == "thm21":
        return thm21()
    if node.kind == "periodic":
        return periodic(node.args[0])
    if node.kind == "thm21tau":
        return thm21_tau(tuple(int(c) for c in node.args[0]))
    if node.kind == "prepend":
        return prepend(node.args[0], build_sequence(node.children[0]))
    if node.kind == "suffix":
        return build_sequence(node.children[0]).suffix(node.args[0])
    if node.kind == "product":
        return product(*(build_sequence(c) for c in node.children))
    if node.kind == "scheme":
        return scheme_generate(parse_scheme_file(node.args[0]))
    if node.kind == "fixture":
        return tm_triple_fixture(node.args[0])
    raise ValueError(f"unknown node kind {node.kind!r}")


def make_sequence(spec):
    """Parse a spec string and build the corresponding handle."""
    seq = build_sequence(parse_spec(spec))
    seq.description = spec
    return seq
