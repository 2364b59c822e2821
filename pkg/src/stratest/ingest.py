"""Reading integer-coded play sequences from CSV files.

The reference RPS dataset stores one subject per file: 50 plays coded as
0, 1, 2.  Which code is which action is not documented, which is harmless
because both tests are invariant to relabeling.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from stratest.core import ActionAlphabet, PlaySequence

log = logging.getLogger(__name__)

REFERENCE_LENGTH = 50
_SPLIT = re.compile(r"[,\r\n]+")


@dataclass(frozen=True)
class SubjectRecord:
    subject_id: str
    sequence: PlaySequence


@dataclass
class LoadResult:
    records: list[SubjectRecord] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)


def parse_sequence_file(content: str, alphabet: ActionAlphabet) -> PlaySequence:
    """Parse comma- and/or newline-separated integer codes into a sequence.

    Blank fields (trailing commas, blank lines) are skipped.  Positions in
    error messages are 1-based over the non-blank tokens.
    """
    content = content.lstrip("\ufeff")
    tokens = [t.strip() for t in _SPLIT.split(content)]
    items = []
    for pos, tok in enumerate((t for t in tokens if t), start=1):
        try:
            value = int(tok)
        except ValueError:
            raise ValueError(f"token {tok!r} is not an integer at position {pos}") from None
        if not 0 <= value < alphabet.k:
            raise ValueError(f"value {value} out of range at position {pos}")
        items.append(value)
    return PlaySequence(alphabet, tuple(items))


def format_sequence(seq: PlaySequence) -> str:
    return ",".join(str(x) for x in seq.items)


def load_dataset(
    directory: str | Path,
    alphabet: ActionAlphabet | None = None,
    recursive: bool = False,
) -> LoadResult:
    """Load every ``*.csv`` under ``directory``, one subject per file.

    The subject id is the file's path relative to ``directory`` without the
    suffix.  Files that fail to parse are collected in ``failures`` rather
    than aborting the load.
    """
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"no such directory: {root}")
    alphabet = alphabet or ActionAlphabet.of_size(3)
    paths = root.rglob("*.csv") if recursive else root.glob("*.csv")

    result = LoadResult()
    for path in paths:
        subject_id = path.relative_to(root).with_suffix("").as_posix()
        try:
            seq = parse_sequence_file(path.read_text(encoding="utf-8"), alphabet)
        except (OSError, UnicodeDecodeError, ValueError) as exc:
            result.failures.append((subject_id, str(exc)))
            continue
        if seq.n != REFERENCE_LENGTH:
            log.warning("%s: %d plays (reference length is %d)", subject_id, seq.n, REFERENCE_LENGTH)
        result.records.append(SubjectRecord(subject_id, seq))

    result.records.sort(key=lambda r: r.subject_id)
    result.failures.sort()
    if not result.records and not result.failures:
        log.warning("no CSV files found in %s", root)
    log.info("loaded %d subjects (%d failures)", len(result.records), len(result.failures))
    return result
