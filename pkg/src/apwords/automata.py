"""Finite automata, transducers, homomorphisms, marker splits, and the
reduction of an automaton image to a reversible one with a certified
deleted-prefix bound."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    AlphabetError,
    FiniteOutputError,
    InvariantViolation,
    ResourceLimitError,
)
from .regulators import reg_iterated_bound, reg_split
from .words import Alphabet, StreamSequence, Word

# Inputs consumed without any output before a lazily-finite image is declared
# exhausted.
DEFAULT_STALL_LIMIT = 2 ** 17

# Hard cap on letters consumed while closing a block alphabet.
DEFAULT_SCAN_CAP = 2 ** 24


class Automaton:
    """Letter-to-letter machine: transition (state, input) -> (state, output)."""

    def __init__(self, input_alphabet, output_alphabet, states, initial, delta):
        states = tuple(states)
        if initial not in states:
            raise ValueError(f"initial state {initial!r} not among states")
        for q in states:
            for s in input_alphabet:
                if (q, s) not in delta:
                    raise ValueError(f"transition missing for ({q!r}, {s!r})")
                nxt, out = delta[(q, s)]
                if nxt not in states:
                    raise ValueError(f"transition target {nxt!r} not a state")
                if out not in output_alphabet:
                    raise AlphabetError(f"output {out!r} not in output alphabet")
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.states = states
        self.initial = initial
        self.delta = dict(delta)

    def step(self, q, s):
        return self.delta[(q, s)]

    def run_on_word(self, q, symbols):
        """End state and emitted outputs of a run from q over the symbols."""
        outs = []
        for s in symbols:
            q, out = self.delta[(q, s)]
            outs.append(out)
        return q, tuple(outs)

    def restricted(self, letters):
        """Copy with the input alphabet cut down to the given letters."""
        keep = tuple(s for s in self.input_alphabet if s in letters)
        if not keep:
            raise ValueError("restriction would empty the input alphabet")
        delta = {
            (q, s): v for (q, s), v in self.delta.items() if s in keep
        }
        return Automaton(
            Alphabet(keep), self.output_alphabet, self.states, self.initial, delta
        )

    def __repr__(self):
        return (
            f"Automaton(states={len(self.states)}, "
            f"input={list(self.input_alphabet)!r})"
        )


class Transducer:
    """Automaton variant emitting a (possibly empty) word per input letter."""

    def __init__(self, input_alphabet, output_alphabet, states, initial, delta):
        states = tuple(states)
        if initial not in states:
            raise ValueError(f"initial state {initial!r} not among states")
        for q in states:
            for s in input_alphabet:
                if (q, s) not in delta:
                    raise ValueError(f"transition missing for ({q!r}, {s!r})")
                nxt, out = delta[(q, s)]
                if nxt not in states:
                    raise ValueError(f"transition target {nxt!r} not a state")
                for o in out:
                    if o not in output_alphabet:
                        raise AlphabetError(f"output {o!r} not in output alphabet")
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.states = states
        self.initial = initial
        self.delta = {k: (v[0], tuple(v[1])) for k, v in delta.items()}


class Homomorphism:
    """Alphabet morphism extended letter-wise; images may be empty."""

    def __init__(self, source, target, images):
        for s in source:
            if s not in images:
                raise ValueError(f"no image for symbol {s!r}")
            for o in images[s]:
                if o not in target:
                    raise AlphabetError(f"image symbol {o!r} not in target alphabet")
        self.source = source
        self.target = target
        self.images = {s: tuple(images[s]) for s in source}

    def apply_word(self, w):
        out = []
        for s in w:
            out.extend(self.images[s])
        return Word(self.target, tuple(out))


def pair_alphabet(input_alphabet, states):
    """The (input symbol, state) product alphabet used for state tracing."""
    return Alphabet(tuple(itertools.product(input_alphabet.symbols, states)))


def run(auto, seq, with_states=False):
    """The automaton image of a sequence.

    With ``with_states`` the output at step n is the (input, current state)
    pair; the declared output letter is then a projection of that pair.
    """
    if seq.alphabet.symbols != auto.input_alphabet.symbols:
        missing = [s for s in seq.alphabet if s not in auto.input_alphabet]
        if missing:
            raise AlphabetError(f"sequence symbols {missing!r} unknown to automaton")
    out_alphabet = (
        pair_alphabet(auto.input_alphabet, auto.states)
        if with_states
        else auto.output_alphabet
    )

    def gen():
        q = auto.initial
        for i in itertools.count():
            s = seq.at(i)
            nxt, out = auto.delta[(q, s)]
            yield (s, q) if with_states else out
            q = nxt

    mode = "pairs" if with_states else "output"
    return StreamSequence(
        out_alphabet, gen(), description=f"run[{mode}]:{seq.description}"
    )


def is_reversible(auto):
    """True iff every input letter permutes the state set."""
    nstates = len(auto.states)
    for s in auto.input_alphabet:
        image = {auto.delta[(q, s)][0] for q in auto.states}
        if len(image) != nstates:
            return False
    return True


def letter_images(auto):
    """letter -> ordered tuple of distinct successor states."""
    images = {}
    for s in auto.input_alphabet:
        succ = {auto.delta[(q, s)][0] for q in auto.states}
        images[s] = tuple(q for q in auto.states if q in succ)
    return images


def infinite_letters(seq, reg):
    """The letters occurring infinitely often, read off the window
    [r(1), 2r(1)-1]: by the regulator's two conditions this window contains
    every recurrent letter and no finitely-occurring one."""
    r1 = reg(1)
    return set(seq.read(r1, 2 * r1 - 1).symbols)


def cyclic_automaton(w, input_alphabet):
    """|w|-state cycle advancing on every input, pairing the input with the
    period letter at the current position; reversible by construction."""
    if isinstance(w, str):
        from .words import word as _word

        w = _word(w)
    if len(w) == 0:
        raise ValueError("period word must be non-empty")
    states = tuple(range(len(w)))
    out_alphabet = Alphabet(
        tuple(itertools.product(input_alphabet.symbols, w.alphabet.symbols))
    )
    delta = {
        (q, s): ((q + 1) % len(w), (s, w[q]))
        for q in states
        for s in input_alphabet
    }
    return Automaton(input_alphabet, out_alphabet, states, 0, delta)


# ---------------------------------------------------------------------------
# Marker splits


@dataclass
class SplitResult:
    marker: object
    block_alphabet: Alphabet
    decode: dict  # block symbol -> Word over the original alphabet
    offset: int  # first position after the first marker occurrence
    split_sequence: object  # SequenceHandle over block_alphabet
    max_block_len: int
    original: object  # the handle that was split


def _scan_blocks(seq, marker, start, stop_blocks, stop_letters):
    """Blocks of seq[start:] ending at each marker, up to either stop."""
    blocks = []
    cur = []
    pos = start
    while len(blocks) < stop_blocks and pos - start < stop_letters:
        s = seq.at(pos)
        cur.append(s)
        if s == marker:
            blocks.append(tuple(cur))
            cur = []
        pos += 1
    return blocks


def split(seq, marker, reg, scan_cap=DEFAULT_SCAN_CAP):
    """Cut a sequence into blocks ending at each occurrence of the marker,
    drop the first (partial) block, and recode blocks over a fresh alphabet.

    The block alphabet is closed after a scan long enough to witness every
    recurrent block (two split-regulator windows); a block first seen after
    closure is a hard invariant violation.
    """
    if marker not in infinite_letters(seq, reg):
        raise ValueError(f"marker {marker!r} does not recur (not in the "
                         "infinitely-occurring letters)")
    r1 = reg(1)
    # first marker occurrence; condition (1) places it within the first window
    first = None
    for i in range(r1):
        if seq.at(i) == marker:
            first = i
            break
    if first is None:
        raise InvariantViolation("marker absent from the first regulator window")
    offset = first + 1

    # phase 1: observe block lengths over one window to size the closure scan
    probe = _scan_blocks(seq, marker, offset, 2 * r1, 2 * r1 * r1)
    if not probe:
        raise InvariantViolation("no complete block in the probe window")
    k_probe = max(len(b) for b in probe)
    closure_blocks = 2 * reg_split(reg, k_probe)(1)
    if closure_blocks * r1 > scan_cap:
        raise ResourceLimitError(
            f"block-alphabet closure scan ({closure_blocks} blocks of up to "
            f"{r1} letters) exceeds cap {scan_cap}"
        )
    seen = {}
    order = []
    for b in _scan_blocks(seq, marker, offset, closure_blocks, scan_cap):
        if b not in seen:
            seen[b] = f"b{len(order)}"
            order.append(b)
    max_block_len = max(len(b) for b in order)
    if max_block_len > r1:
        raise InvariantViolation(
            f"block of length {max_block_len} exceeds the regulator window {r1}"
        )
    block_alphabet = Alphabet(tuple(seen[b] for b in order))
    decode = {seen[b]: Word(seq.alphabet, b) for b in order}

    def gen():
        cur = []
        for pos in itertools.count(offset):
            s = seq.at(pos)
            cur.append(s)
            if s == marker:
                b = tuple(cur)
                cur = []
                sym = seen.get(b)
                if sym is None:
                    raise InvariantViolation(
                        f"block {Word(seq.alphabet, b).text()!r} first seen "
                        "after the closure scan"
                    )
                yield sym

    split_sequence = StreamSequence(
        block_alphabet, gen(), description=f"split:{marker}:{seq.description}"
    )
    return SplitResult(
        marker=marker,
        block_alphabet=block_alphabet,
        decode=decode,
        offset=offset,
        split_sequence=split_sequence,
        max_block_len=max_block_len,
        original=seq,
    )


def block_automaton(auto, sr):
    """Recode an automaton to act on split blocks.

    States are the successors of the marker letter; the transition on a
    block runs the original machine over the decoded block, and the output
    letter is the full tuple of (input, state) pairs traversed.  The initial
    state is where the original machine lands after the dropped prefix.
    """
    if sr.marker not in auto.input_alphabet:
        raise AlphabetError(f"marker {sr.marker!r} unknown to the automaton")
    succ = {auto.delta[(q, sr.marker)][0] for q in auto.states}
    states = tuple(q for q in auto.states if q in succ)

    delta = {}
    outputs = []
    for q in states:
        for b in sr.block_alphabet:
            blk = sr.decode[b].symbols
            end = q
            pairs = []
            for s in blk:
                pairs.append((s, end))
                end = auto.delta[(end, s)][0]
            out = tuple(pairs)
            delta[(q, b)] = (end, out)
            if out not in outputs:
                outputs.append(out)

    # state after the deleted prefix (ends with the marker, so it lies in Q1)
    initial = auto.initial
    dropped = sr.original.read(0, sr.offset - 1).symbols if sr.offset else ()
    for s in dropped:
        initial = auto.delta[(initial, s)][0]
    if initial not in states:
        raise InvariantViolation("post-prefix state escaped the marker image")
    return Automaton(
        sr.block_alphabet, Alphabet(tuple(outputs)), states, initial, delta
    )


@dataclass
class ReductionStep:
    letter: object
    image: tuple  # successor states of the chosen letter
    split_result: SplitResult
    automaton: Automaton
    deleted_letters: int  # in original-alphabet letters


@dataclass
class ReductionReport:
    steps: list
    final_automaton: Automaton
    deleted_prefix_len: int
    theorem_bound: int

    @property
    def state_counts(self):
        return [len(s.automaton.states) for s in self.steps]


def reduce_to_reversible(auto, seq, reg, scan_cap=DEFAULT_SCAN_CAP):
    """Iteratively split on a non-injective letter until the block automaton
    is reversible, certifying the deleted prefix length against the
    iterated-composition bound.

    At each step the machine is first restricted to the letters recurring in
    the current sequence; among the remaining non-injective letters the one
    with the smallest state image is chosen (ties by alphabet order).
    """
    if seq.alphabet.symbols != auto.input_alphabet.symbols:
        missing = [s for s in seq.alphabet if s not in auto.input_alphabet]
        if missing:
            raise AlphabetError(f"sequence symbols {missing!r} unknown to automaton")
    bound = reg_iterated_bound(reg, len(auto.states))

    cur_auto = auto
    cur_seq = seq
    cur_reg = reg
    # current-level letter -> how many original letters it spans
    span = {s: 1 for s in seq.alphabet}
    deleted = 0
    steps = []
    while True:
        letters = infinite_letters(cur_seq, cur_reg)
        restricted = cur_auto.restricted(letters)
        if is_reversible(restricted):
            final = restricted
            break
        images = letter_images(restricted)
        candidates = [
            s for s in restricted.input_alphabet
            if len(images[s]) < len(restricted.states)
        ]
        letter = min(
            candidates,
            key=lambda s: (len(images[s]), restricted.input_alphabet.index(s)),
        )
        sr = split(cur_seq, letter, cur_reg, scan_cap=scan_cap)
        dropped = cur_seq.read(0, sr.offset - 1).symbols
        step_deleted = sum(span[s] for s in dropped)
        deleted += step_deleted
        nxt_auto = block_automaton(restricted, sr)
        if len(nxt_auto.states) >= len(restricted.states):
            raise InvariantViolation("state count failed to decrease")
        steps.append(
            ReductionStep(
                letter=letter,
                image=images[letter],
                split_result=sr,
                automaton=nxt_auto,
                deleted_letters=step_deleted,
            )
        )
        if len(steps) > len(auto.states):
            raise InvariantViolation("more reduction steps than initial states")
        span = {
            b: sum(span[s] for s in sr.decode[b].symbols)
            for b in sr.block_alphabet
        }
        cur_auto = nxt_auto
        cur_seq = sr.split_sequence
        cur_reg = reg_split(cur_reg, sr.max_block_len)

    if deleted > bound:
        raise InvariantViolation(
            f"deleted prefix {deleted} exceeds the theorem bound {bound}"
        )
    report = ReductionReport(
        steps=steps,
        final_automaton=final,
        deleted_prefix_len=deleted,
        theorem_bound=bound,
    )
    if not is_reversible(report.final_automaton):
        raise InvariantViolation("final automaton is not reversible")
    return report


# ---------------------------------------------------------------------------
# Homomorphisms and transducers


def hom_apply(h, seq, reg=None, stall_limit=DEFAULT_STALL_LIMIT):
    """Concatenated image h(seq(0)) h(seq(1)) ...

    With a regulator, finiteness of the image is decided up front from the
    recurrent letters; without one, a read that consumes ``stall_limit``
    inputs with no output raises the finite-image error lazily.
    """
    if reg is not None:
        recurrent = infinite_letters(seq, reg)
        if all(len(h.images.get(s, ())) == 0 for s in recurrent):
            raise FiniteOutputError(0)

    def gen():
        stalled = 0
        for i in itertools.count():
            out = h.images[seq.at(i)]
            if out:
                stalled = 0
                yield from out
            else:
                stalled += 1
                if reg is None and stalled >= stall_limit:
                    return
        # not reached

    return StreamSequence(h.target, gen(), description=f"hom:{seq.description}")


def transducer_run(trans, seq, stall_limit=DEFAULT_STALL_LIMIT):
    """The concatenated transducer output; possibly finite, in which case
    reads past the produced length raise lazily."""
    if seq.alphabet.symbols != trans.input_alphabet.symbols:
        missing = [s for s in seq.alphabet if s not in trans.input_alphabet]
        if missing:
            raise AlphabetError(f"sequence symbols {missing!r} unknown to transducer")

    def gen():
        q = trans.initial
        stalled = 0
        for i in itertools.count():
            q, out = trans.delta[(q, seq.at(i))]
            if out:
                stalled = 0
                yield from out
            else:
                stalled += 1
                if stalled >= stall_limit:
                    return

    return StreamSequence(
        trans.output_alphabet, gen(), description=f"transduce:{seq.description}"
    )


def transducer_decompose(trans):
    """Split a transducer into a state-tracing automaton plus a homomorphism.

    The automaton writes (input, state) pairs; the homomorphism maps each
    pair to the transducer's output word for it.  Composing the two
    reproduces the transducer's mapping wherever either side is defined.
    """
    pairs = pair_alphabet(trans.input_alphabet, trans.states)
    delta = {
        (q, s): (trans.delta[(q, s)][0], (s, q))
        for q in trans.states
        for s in trans.input_alphabet
    }
    auto = Automaton(trans.input_alphabet, pairs, trans.states, trans.initial, delta)
    images = {(s, q): trans.delta[(q, s)][1] for (s, q) in pairs}
    hom = Homomorphism(pairs, trans.output_alphabet, images)
    return auto, hom


# ---------------------------------------------------------------------------
# Text formats


def _parse_header(lines, path, required):
    header = {}
    body = []
    for lineno, raw in lines:
        parts = raw.split()
        if parts[0].rstrip(":") in ("input", "output", "states", "initial"):
            header[parts[0].rstrip(":")] = parts[1:]
        else:
            body.append((lineno, raw))
    for key in required:
        if key not in header:
            raise ValueError(f"{path}: missing {key!r} header line")
    if "initial" in header and len(header["initial"]) != 1:
        raise ValueError(f"{path}: initial takes exactly one state")
    return header, body


def _content_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def _parse_transitions(body, path):
    delta = {}
    for lineno, line in body:
        try:
            lhs, rhs = line.split("->")
            q, s = lhs.split()
            rhs = rhs.split()
            nxt, out = rhs[0], rhs[1:]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad transition line {line!r}")
        delta[(q, s)] = (nxt, out)
    return delta


def load_automaton(path):
    """Text format: header lines ``input:``, ``output:``, ``states:``,
    ``initial:``, then ``state symbol -> state output`` lines."""
    header, body = _parse_header(
        list(_content_lines(path)), path, ("input", "output", "states", "initial")
    )
    delta = {}
    for key, (nxt, out) in _parse_transitions(body, path).items():
        if len(out) != 1:
            raise ValueError(f"{path}: automaton transitions emit exactly one symbol")
        delta[key] = (nxt, out[0])
    return Automaton(
        Alphabet(header["input"]),
        Alphabet(header["output"]),
        tuple(header["states"]),
        header["initial"][0],
        delta,
    )


def load_transducer(path):
    """Same format as automata, but the output field is a word or ``-``."""
    header, body = _parse_header(
        list(_content_lines(path)), path, ("input", "output", "states", "initial")
    )
    delta = {}
    for key, (nxt, out) in _parse_transitions(body, path).items():
        delta[key] = (nxt, () if out == ["-"] else tuple(out))
    return Transducer(
        Alphabet(header["input"]),
        Alphabet(header["output"]),
        tuple(header["states"]),
        header["initial"][0],
        delta,
    )


def load_homomorphism(path):
    """Lines ``symbol -> word|-`` with ``input:``/``output:`` headers."""
    header, body = _parse_header(list(_content_lines(path)), path, ("input",))
    source = Alphabet(header["input"])
    target = Alphabet(header["output"]) if "output" in header else source
    images = {}
    for lineno, line in body:
        try:
            lhs, rhs = line.split("->")
            (s,) = lhs.split()
            rhs = rhs.split()
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad image line {line!r}")
        images[s] = () if rhs == ["-"] else tuple(rhs)
    return Homomorphism(source, target, images)


def automaton_text(auto):
    lines = [
        "input: " + " ".join(str(s) for s in auto.input_alphabet),
        "output: " + " ".join(str(s) for s in auto.output_alphabet),
        "states: " + " ".join(str(q) for q in auto.states),
        f"initial: {auto.initial}",
    ]
    for q in auto.states:
        for s in auto.input_alphabet:
            nxt, out = auto.delta[(q, s)]
            lines.append(f"{q} {s} -> {nxt} {out}")
    return "\n".join(lines) + "\n"


def homomorphism_text(hom):
    lines = [
        "input: " + " ".join(str(s) for s in hom.source),
        "output: " + " ".join(str(s) for s in hom.target),
    ]
    for s in hom.source:
        image = hom.images[s]
        rhs = " ".join(str(o) for o in image) if image else "-"
        lines.append(f"{s} -> {rhs}")
    return "\n".join(lines) + "\n"
