"""Deterministic word-hash tokenizer.

Words are mapped to ids by FNV-1a-64 hashing into the non-reserved id
range, so the tokenizer needs no training data and produces identical
ids on any platform. Template tags (``<|sys|>``, ``<|ans|>``, ...) and
the answer words ``yes``/``no`` live in a small reserved id range so the
scorer can read their logits directly.

``encode`` is the plain one-string path. ``encode_batch`` produces
token-for-token identical output but performs its setup once and shares
a word->id memo across the whole batch; because prompts in a batch share
most of their vocabulary, hashing work collapses and batched encoding is
measurably faster (see ``measure_batch_speedup``).
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211
_U64 = (1 << 64) - 1

# Template tags from the prompt assembly contract, in id order.
TEMPLATE_TAGS = (
    "<|sys|>",
    "<|/sys|>",
    "<|q|>",
    "<|/q|>",
    "<|meta|>",
    "<|/meta|>",
    "<|desc|>",
    "<|/desc|>",
    "<|ans|>",
)

_WORD = "[a-z0-9]+"


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _U64
    return h


@dataclass(frozen=True)
class Vocab:
    """Tokenizer configuration: id space plus the reserved-id table."""

    size: int = 32768
    reserved: int = 16
    yes_id: int = 1
    no_id: int = 2
    specials: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.specials:
            table = {"yes": self.yes_id, "no": self.no_id}
            for i, tag in enumerate(TEMPLATE_TAGS):
                table[tag] = 3 + i
            object.__setattr__(self, "specials", table)
        if self.yes_id == self.no_id:
            raise ValueError("yes_id and no_id must differ")
        if max(self.specials.values()) >= self.reserved:
            raise ValueError("special ids must fit in the reserved range")
        if self.reserved >= self.size:
            raise ValueError("vocab size must exceed reserved range")

    def word_id(self, word: str) -> int:
        special = self.specials.get(word)
        if special is not None:
            return special
        return self.reserved + fnv1a_64(word.encode("utf-8")) % (self.size - self.reserved)

    def to_config(self) -> dict:
        return {
            "size": self.size,
            "reserved": self.reserved,
            "yes_id": self.yes_id,
            "no_id": self.no_id,
            "specials": dict(self.specials),
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "Vocab":
        return cls(
            size=cfg["size"],
            reserved=cfg["reserved"],
            yes_id=cfg["yes_id"],
            no_id=cfg["no_id"],
            specials=dict(cfg.get("specials") or {}),
        )


def _scanner(vocab: Vocab):
    # Tags first (longest first) so they win over punctuation splitting.
    tags = sorted((t for t in vocab.specials if not t.isalnum()), key=len, reverse=True)
    pattern = "|".join([re.escape(t) for t in tags] + [_WORD])
    return re.compile(pattern)


def encode_with_spans(text: str, vocab: Vocab) -> list[tuple[int, int, int]]:
    """Encode and keep the (start, end) character span of every token.

    Spans refer to the original (pre-lowercasing) string, which lets the
    prompt-truncation path cut the source text at an exact token boundary.
    """
    scanner = _scanner(vocab)
    lowered = text.lower()
    out = []
    for m in scanner.finditer(lowered):
        out.append((vocab.word_id(m.group()), m.start(), m.end()))
    return out


def encode(text: str, vocab: Vocab) -> list[int]:
    """Tokenize one string: lowercase, match tags greedily, hash words."""
    scanner = _scanner(vocab)
    lowered = text.lower()
    specials = vocab.specials
    reserved = vocab.reserved
    modulus = vocab.size - reserved
    ids = []
    for m in scanner.finditer(lowered):
        word = m.group()
        special = specials.get(word)
        if special is not None:
            ids.append(special)
        else:
            ids.append(reserved + fnv1a_64(word.encode("utf-8")) % modulus)
    return ids


def encode_batch(texts: list[str], vocab: Vocab) -> list[list[int]]:
    """Tokenize many strings in one call.

    Output is element-wise identical to ``encode``. Setup (scanner and
    tag table) happens once, and a word->id memo is shared across the
    batch; repeated words across prompts are hashed only once.
    """
    scanner = _scanner(vocab)
    reserved = vocab.reserved
    modulus = vocab.size - reserved
    memo = dict(vocab.specials)
    results = []
    for text in texts:
        ids = []
        append = ids.append
        get = memo.get
        for m in scanner.finditer(text.lower()):
            word = m.group()
            wid = get(word)
            if wid is None:
                wid = reserved + fnv1a_64(word.encode("utf-8")) % modulus
                memo[word] = wid
            append(wid)
        results.append(ids)
    return results


def decode_debug(ids: list[int], vocab: Vocab) -> str:
    """Lossy debugging aid: specials decode to their strings, hashed ids
    to ``⟨w#id⟩`` placeholders."""
    rev = {v: k for k, v in vocab.specials.items()}
    parts = []
    for i in ids:
        parts.append(rev.get(i, f"⟨w#{i}⟩"))
    return " ".join(parts)


def measure_batch_speedup(
    texts: list[str], batch_sizes: tuple[int, ...] = (1, 2, 4, 8), repeats: int = 1
) -> dict[int, float]:
    """Measure encode_batch speedup against one-encode-call-per-string.

    Baseline is one ``encode`` call per string, including its per-call
    setup. For each batch size B the same corpus is processed in chunks
    of B via ``encode_batch``. Returns {batch_size: speedup}.
    """
    vocab = Vocab()
    t0 = time.perf_counter()
    for _ in range(repeats):
        for t in texts:
            encode(t, vocab)
    sequential = time.perf_counter() - t0

    speedups = {}
    for b in batch_sizes:
        t0 = time.perf_counter()
        for _ in range(repeats):
            for i in range(0, len(texts), b):
                encode_batch(texts[i : i + b], vocab)
        speedups[b] = sequential / (time.perf_counter() - t0)
    return speedups
