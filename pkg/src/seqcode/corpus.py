"""Corpus ingestion: scan source trees, extract method records, split sets.

The on-disk corpus format is JSON Lines, one method per line:
{"id": str, "language": str, "source": str, "path": str, "docstring": str|null}
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from . import grammars

log = logging.getLogger(__name__)


@dataclass
class MethodRecord:
    """One method or function. `docstring` is a fine-tuning label only and
    is never consumed by any pre-training step."""

    id: str
    language: str
    source: str
    path: str
    docstring: str | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "language": self.language,
                "source": self.source,
                "path": self.path,
                "docstring": self.docstring,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "MethodRecord":
        obj = json.loads(line)
        return cls(
            id=obj["id"],
            language=obj["language"],
            source=obj["source"],
            path=obj["path"],
            docstring=obj.get("docstring"),
        )


@dataclass
class DatasetSplit:
    """Disjoint train/dev/test id lists covering the whole corpus."""

    train: list[str]
    dev: list[str]
    test: list[str]
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {"train": self.train, "dev": self.dev, "test": self.test, "seed": self.seed}
        )

    @classmethod
    def from_json(cls, text: str) -> "DatasetSplit":
        obj = json.loads(text)
        return cls(train=obj["train"], dev=obj["dev"], test=obj["test"], seed=obj["seed"])


def scan_corpus(
    root: str | Path, languages: Iterable[str]
) -> Iterator[tuple[str, str, str]]:
    """Yield (path, language, file text) for every file under `root` whose
    extension maps to a requested language, in lexicographic path order.
    Unreadable files are skipped with a warning; an unreadable root raises."""
    root = Path(root)
    if not root.is_dir():
        raise IOError(f"corpus root is not a readable directory: {root}")
    wanted = set(languages)
    ext_map = {ext: lang for ext, lang in grammars.EXTENSIONS.items() if lang in wanted}
    unknown = wanted - set(grammars.LANGUAGES)
    if unknown:
        raise ValueError(f"unsupported languages: {sorted(unknown)}")
    paths = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix in ext_map)
    for path in paths:
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", path, exc)
            continue
        yield str(path), ext_map[path.suffix], text


def method_id(path: str, language: str, offset: int, source: str) -> str:
    digest = hashlib.sha1(f"{path}:{offset}:{source}".encode("utf-8")).hexdigest()
    return f"{language}-{digest[:16]}"


def extract_methods(file_text: str, language: str, path: str = "<memory>") -> list[MethodRecord]:
    """One record per method/function definition (nested ones included), in
    source order. A file with no methods yields an empty list."""
    grammar = grammars.get_grammar(language)
    records = []
    for method in grammar.iter_methods(file_text):
        records.append(
            MethodRecord(
                id=method_id(path, language, method.offset, method.source),
                language=language,
                source=method.source,
                path=path,
                docstring=method.docstring,
            )
        )
    return records


def ingest(root: str | Path, languages: Iterable[str]) -> list[MethodRecord]:
    """Scan a tree and extract every method record."""
    records: list[MethodRecord] = []
    for path, language, text in scan_corpus(root, languages):
        records.extend(extract_methods(text, language, path=path))
    return records


def split_dataset(
    records: list[MethodRecord], ratios: tuple[float, float, float], seed: int
) -> DatasetSplit:
    """Shuffle with `seed`, then partition by `ratios` (train, dev, test).

    Dev and test sizes round down; the remainder goes to train. The same
    seed always produces the same split."""
    if not records:
        raise ValueError("cannot split an empty record list")
    total = sum(ratios)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"split ratios must sum to 1.0, got {total}")
    ids = [r.id for r in records]
    rng = random.Random(seed)
    rng.shuffle(ids)
    n = len(ids)
    n_dev = int(n * ratios[1])
    n_test = int(n * ratios[2])
    n_train = n - n_dev - n_test
    return DatasetSplit(
        train=ids[:n_train],
        dev=ids[n_train : n_train + n_dev],
        test=ids[n_train + n_dev :],
        seed=seed,
    )


def write_jsonl(records: Iterable[MethodRecord], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> list[MethodRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(MethodRecord.from_json(line))
    return records
