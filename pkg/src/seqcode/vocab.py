"""Subword vocabulary: BPE for code and NL tokens, word ids for tree tokens.

One shared id space: six special symbols at fixed ids 0..5, then a reserved
band of whole-word ids for linearized-tree tokens, then the BPE symbols.
BPE words carry a private-use end-of-word sentinel on their last character
so decoding recovers exact token boundaries.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter, defaultdict
from typing import Iterable, Iterator

from .errors import DecodeError, TrainError

__all__ = ["Vocabulary", "train_bpe", "SPECIALS", "PAD", "SOS", "EOS", "SEP", "MASK", "UNK"]

SPECIALS = ("[PAD]", "[SOS]", "[EOS]", "[SEP]", "[MASK]", "[UNK]")
PAD, SOS, EOS, SEP, MASK, UNK = range(6)

_EOW = ""  # end-of-word sentinel, private use area


class Vocabulary:
    """Trained merge table plus id maps. Construct via `train_bpe` or `load`."""

    def __init__(
        self,
        merges: list[tuple[str, str]],
        alphabet: list[str],
        xsbt_words: list[str],
    ):
        self.merges = [tuple(m) for m in merges]
        self.alphabet = list(alphabet)
        self.xsbt_words = list(xsbt_words)
        self._ranks = {pair: i for i, pair in enumerate(self.merges)}
        self._cache: dict[str, list[str]] = {}

        self.id_to_token: list[str] = list(SPECIALS)
        self.id_to_token.extend(self.xsbt_words)
        self._xsbt_ids = {w: len(SPECIALS) + i for i, w in enumerate(self.xsbt_words)}
        symbols = list(self.alphabet)
        for a, b in self.merges:
            symbols.append(a + b)
        self._bpe_base = len(self.id_to_token)
        self.id_to_token.extend(symbols)
        self._bpe_ids = {s: self._bpe_base + i for i, s in enumerate(symbols)}
        self._special_ids = {s: i for i, s in enumerate(SPECIALS)}

    def __len__(self) -> int:
        return len(self.id_to_token)

    @property
    def size(self) -> int:
        return len(self.id_to_token)

    # -- encoding ----------------------------------------------------------

    def _bpe(self, token: str) -> list[str]:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        symbols = list(token)
        symbols[-1] = symbols[-1] + _EOW
        while len(symbols) > 1:
            best_rank = None
            best_idx = -1
            for i in range(len(symbols) - 1):
                rank = self._ranks.get((symbols[i], symbols[i + 1]))
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
                    best_idx = i
            if best_rank is None:
                break
            pair = (symbols[best_idx], symbols[best_idx + 1])
            merged: list[str] = []
            i = 0
            while i < len(symbols):
                if i < len(symbols) - 1 and (symbols[i], symbols[i + 1]) == pair:
                    merged.append(symbols[i] + symbols[i + 1])
                    i += 2
                else:
                    merged.append(symbols[i])
                    i += 1
            symbols = merged
        self._cache[token] = symbols
        return symbols

    def encode_token(self, token: str, mode: str = "bpe") -> list[int]:
        """Ids for one token. Special-token literals map to their fixed ids
        and are never split."""
        special = self._special_ids.get(token)
        if special is not None:
            return [special]
        if mode == "xsbt_word":
            return [self._xsbt_ids.get(token, UNK)]
        if mode != "bpe":
            raise ValueError(f"unknown encode mode: {mode!r}")
        if not token:
            return []
        return [self._bpe_ids.get(sym, UNK) for sym in self._bpe(token)]

    def encode(self, tokens: Iterable[str], mode: str = "bpe") -> list[int]:
        out: list[int] = []
        for token in tokens:
            out.extend(self.encode_token(token, mode))
        return out

    def encode_groups(self, tokens: Iterable[str], mode: str = "bpe") -> list[list[int]]:
        """Per-token id groups, for span-aligned masking."""
        return [self.encode_token(t, mode) for t in tokens]

    # -- decoding ----------------------------------------------------------

    def decode(self, ids: Iterable[int]) -> list[str]:
        """Inverse of encode. Special ids render as their literal names;
        a trailing unterminated word (truncated input) is emitted as-is."""
        tokens: list[str] = []
        buffer: list[str] = []

        def flush():
            if buffer:
                tokens.append("".join(buffer))
                buffer.clear()

        for raw in ids:
            i = int(raw)
            if i < 0 or i >= len(self.id_to_token):
                raise DecodeError(f"id {i} out of range (vocab size {len(self.id_to_token)})")
            text = self.id_to_token[i]
            if i < self._bpe_base:  # specials and whole-word tree tokens
                flush()
                tokens.append(text)
            elif text.endswith(_EOW):
                buffer.append(text[: -len(_EOW)])
                flush()
            else:
                buffer.append(text)
        flush()
        return tokens

    # -- persistence ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "specials": list(SPECIALS),
            "xsbt_words": self.xsbt_words,
            "alphabet": self.alphabet,
            "merges": [list(m) for m in self.merges],
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=0, sort_keys=True)

    @classmethod
    def load(cls, path: str) -> "Vocabulary":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if obj.get("specials") != list(SPECIALS):
            raise TrainError("vocabulary file has incompatible special symbols")
        return cls(
            merges=[tuple(m) for m in obj["merges"]],
            alphabet=obj["alphabet"],
            xsbt_words=obj["xsbt_words"],
        )

    def content_hash(self) -> str:
        payload = json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def train_bpe(
    token_streams: Iterable[Iterable[str]],
    vocab_size: int,
    xsbt_words: Iterable[str] = (),
) -> Vocabulary:
    """Learn BPE merges over the given token streams (code and NL tokens).

    Deterministic given input order: the most frequent adjacent symbol pair
    wins each round, ties broken by first-seen pair. Learning stops at the
    size budget or when no pair occurs twice. `xsbt_words` fill the reserved
    whole-word id band."""
    xsbt_words = list(dict.fromkeys(xsbt_words))
    word_freq: Counter[str] = Counter()
    word_order: dict[str, int] = {}
    for stream in token_streams:
        for token in stream:
            if not token or token in SPECIALS:
                continue
            word_freq[token] += 1
            if token not in word_order:
                word_order[token] = len(word_order)
    if not word_freq:
        raise TrainError("cannot train a vocabulary on an empty token stream")

    words = sorted(word_freq, key=word_order.__getitem__)
    symbol_seqs: dict[str, list[str]] = {}
    alphabet: list[str] = []
    seen_symbols = set()
    for word in words:
        symbols = list(word)
        symbols[-1] = symbols[-1] + _EOW
        symbol_seqs[word] = symbols
        for sym in symbols:
            if sym not in seen_symbols:
                seen_symbols.add(sym)
                alphabet.append(sym)

    budget = vocab_size - len(SPECIALS) - len(xsbt_words) - len(alphabet)
    if budget < 0:
        raise ValueError(
            f"vocab_size {vocab_size} cannot hold {len(SPECIALS)} specials, "
            f"{len(xsbt_words)} tree tokens and a {len(alphabet)}-symbol alphabet"
        )

    pair_counts: Counter[tuple[str, str]] = Counter()
    pair_order: dict[tuple[str, str], int] = {}
    pair_words: dict[tuple[str, str], set[str]] = defaultdict(set)

    def count_word(word: str, sign: int):
        symbols = symbol_seqs[word]
        freq = word_freq[word] * sign
        for pair in zip(symbols, symbols[1:]):
            pair_counts[pair] += freq
            if sign > 0:
                if pair not in pair_order:
                    pair_order[pair] = len(pair_order)
                pair_words[pair].add(word)

    for word in words:
        count_word(word, +1)

    merges: list[tuple[str, str]] = []
    for _ in range(budget):
        best = None
        best_key = None
        for pair, count in pair_counts.items():
            if count < 2:
                continue
            key = (-count, pair_order[pair])
            if best_key is None or key < best_key:
                best_key = key
                best = pair
        if best is None:
            break
        merges.append(best)
        merged_sym = best[0] + best[1]
        for word in list(pair_words[best]):
            count_word(word, -1)
            symbols = symbol_seqs[word]
            out: list[str] = []
            i = 0
            while i < len(symbols):
                if i < len(symbols) - 1 and (symbols[i], symbols[i + 1]) == best:
                    out.append(merged_sym)
                    i += 2
                else:
                    out.append(symbols[i])
                    i += 1
            symbol_seqs[word] = out
            count_word(word, +1)
        pair_counts = Counter({p: c for p, c in pair_counts.items() if c > 0})

    return Vocabulary(merges=merges, alphabet=alphabet, xsbt_words=xsbt_words)


def collect_xsbt_words(linearizations: Iterable[Iterable[str]]) -> list[str]:
    """Distinct tree tokens in first-seen order, for the whole-word band."""
    seen: dict[str, None] = {}
    for tokens in linearizations:
        for tok in tokens:
            if tok not in seen:
                seen[tok] = None
    return list(seen)
