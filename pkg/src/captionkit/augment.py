"""Vocabulary strategies: correction/pruning, synonym expansion, back-translation.

Every strategy returns a new corpus with a derived provenance suffix; inputs
are never mutated. Correction rewrites caption text as the corrected token
join; the two expansion strategies append variants and keep the originals.
"""

from __future__ import annotations

import logging
import random
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Caption, CaptionSource, Corpus
from .exceptions import ConfigurationError, FormatError, TranslationError, ValidationError
from .tokens import tokenize
from .translate import TranslationChain

logger = logging.getLogger(__name__)

MergePattern = tuple[tuple[str, str], str]


def _check_token(value: str, what: str) -> None:
    if not value or value.split() != [value]:
        raise ValidationError(f"{what} must be a single non-empty token, got {value!r}")


@dataclass(frozen=True)
class CorrectionRules:
    """Accepted-word dictionary, ordered bigram merge rules, manual overrides."""

    dictionary: frozenset[str]
    merge_patterns: tuple[MergePattern, ...] = ()
    manual_overrides: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (first, second), merged in self.merge_patterns:
            _check_token(first, "merge pattern word")
            _check_token(second, "merge pattern word")
            _check_token(merged, "merged token")
        for word, replacement in self.manual_overrides.items():
            _check_token(word, "override word")
            _check_token(replacement, "override replacement")


@dataclass(frozen=True)
class Thesaurus:
    """Word to ordered synonym list; no word may list itself."""

    entries: Mapping[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        for word, synonyms in self.entries.items():
            if not synonyms:
                raise ValidationError(f"thesaurus entry {word!r} has no synonyms")
            if word in synonyms:
                raise ValidationError(f"thesaurus entry {word!r} lists itself as a synonym")

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def load_dictionary(path: str | Path) -> frozenset[str]:
    """One lower-case word per line; blank lines skipped."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def load_merge_rules(path: str | Path) -> tuple[MergePattern, ...]:
    """TSV ``bigram<TAB>replacement``, e.g. ``c shape<TAB>c-shaped``; file order kept."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}: line {lineno}: expected 'bigram<TAB>replacement'")
            bigram = parts[0].lower().split()
            if len(bigram) != 2:
                raise FormatError(f"{path}: line {lineno}: bigram must be exactly two words")
            rules.append(((bigram[0], bigram[1]), parts[1].strip().lower()))
    return tuple(rules)


def load_overrides(path: str | Path) -> dict[str, str]:
    """TSV ``misspelled<TAB>replacement``."""
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}: line {lineno}: expected 'word<TAB>replacement'")
            overrides[parts[0].strip().lower()] = parts[1].strip().lower()
    return overrides


def load_thesaurus(path: str | Path) -> Thesaurus:
    """TSV ``word<TAB>syn1,syn2,...``."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}: line {lineno}: expected 'word<TAB>syn1,syn2,...'")
            word = parts[0].strip().lower()
            synonyms = tuple(s.strip().lower() for s in parts[1].split(",") if s.strip())
            entries[word] = synonyms
    return Thesaurus(entries)


def _edits1(word: str, alphabet: Sequence[str]) -> set[str]:
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [left + right[1:] for left, right in splits if right]
    transposes = [left + right[1] + right[0] + right[2:] for left, right in splits if len(right) > 1]
    replaces = [left + ch + right[1:] for left, right in splits if right for ch in alphabet]
    inserts = [left + ch + right for left, right in splits for ch in alphabet]
    return set(deletes + transposes + replaces + inserts)


def _nearest_known(token: str, known: frozenset[str], alphabet: Sequence[str]) -> set[str]:
    one_away = _edits1(token, alphabet)
    hits = (one_away & known) - {token}
    if hits:
        return hits
    hits = set()
    for edited in one_away:
        hits.update(word for word in _edits1(edited, alphabet) if word in known)
    return hits - {token}


def _apply_merges(tokens: list[str], patterns: tuple[MergePattern, ...]) -> list[str]:
    if not patterns:
        return tokens
    out: list[str] = []
    i = 0
    while i < len(tokens):
        for (first, second), merged in patterns:
            if i + 1 < len(tokens) and tokens[i] == first and tokens[i + 1] == second:
                out.append(merged)
                i += 2
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


def correct(corpus: Corpus, rules: CorrectionRules, prune_duplicates: bool = False) -> Corpus:
    """Merge broken bigrams, apply overrides, spell-fix, optionally prune duplicates.

    Out-of-dictionary tokens are replaced by the nearest accepted word within
    edit distance 2 (one or two single-character deletes/inserts/replaces or
    adjacent transposes), ties broken by higher corpus frequency then
    lexicographically. Tokens of one or two characters and pure digit tokens
    are exempt from fuzzy substitution; merge rules and overrides still apply
    to them. Pruning keeps the first occurrence of each normalized caption
    corpus-wide; a record whose captions are all pruned is dropped.
    """
    if not rules.dictionary:
        raise ConfigurationError("correction rules have an empty dictionary")
    corpus_freq = Counter(tok for cap in corpus.captions() for tok in tokenize(cap.raw).tokens)
    known = frozenset(
        set(rules.dictionary)
        | {merged for _, merged in rules.merge_patterns}
        | set(rules.manual_overrides.values())
    )
    alphabet = sorted({ch for word in known for ch in word})
    cache: dict[str, str] = {}

    def fix(token: str) -> str:
        if token in known:
            return token
        if len(token) <= 2 or token.isdigit():
            return token
        if token not in cache:
            candidates = _nearest_known(token, known, alphabet)
            if candidates:
                cache[token] = min(candidates, key=lambda w: (-corpus_freq[w], w))
            else:
                cache[token] = token
                logger.info("no correction within edit distance 2 for %r", token)
        return cache[token]

    seen_norms: set[str] = set()
    records_out = []
    for record in corpus.records:
        captions_out = []
        for cap in record.captions:
            toks = _apply_merges(list(tokenize(cap.raw).tokens), rules.merge_patterns)
            toks = [rules.manual_overrides.get(t, t) for t in toks]
            toks = [fix(t) for t in toks]
            if prune_duplicates:
                norm = " ".join(toks)
                if norm in seen_norms:
                    continue
                seen_norms.add(norm)
            text = " ".join(toks) if toks else cap.raw
            captions_out.append(Caption(record.image_id, text, cap.source))
        if captions_out:
            records_out.append(replace(record, captions=tuple(captions_out)))
        else:
            logger.info("record %r dropped: all captions pruned as duplicates", record.image_id)
    return Corpus(tuple(records_out), f"{corpus.provenance}-corrected")


def synonym_expand(
    corpus: Corpus,
    thesaurus: Thesaurus,
    replacements_per_caption: int = 1,
    *,
    seed: int,
) -> Corpus:
    """Append one synonym-substituted variant per distinct caption (seeded).

    For each caption whose normalized form has not been seen before, up to
    ``replacements_per_caption`` thesaurus-covered token positions are picked
    uniformly at random and each replaced by a uniformly chosen synonym.
    Originals are always retained; captions with no covered token gain no
    variant. Equal seeds give byte-identical output.
    """
    if not len(thesaurus):
        raise ConfigurationError("thesaurus is empty")
    if replacements_per_caption < 1:
        raise ValueError("replacements_per_caption must be >= 1")
    rng = random.Random(seed)
    seen_norms: set[str] = set()
    records_out = []
    for record in corpus.records:
        variants = []
        for cap in record.captions:
            toks = list(tokenize(cap.raw).tokens)
            norm = " ".join(toks)
            if not toks or norm in seen_norms:
                continue
            seen_norms.add(norm)
            covered = [i for i, tok in enumerate(toks) if tok in thesaurus]
            if not covered:
                continue
            picks = rng.sample(covered, min(replacements_per_caption, len(covered)))
            for position in sorted(picks):
                toks[position] = rng.choice(thesaurus.entries[toks[position]])
            variants.append(Caption(record.image_id, " ".join(toks), CaptionSource.AUGMENTED))
        records_out.append(replace(record, captions=record.captions + tuple(variants)))
    return Corpus(tuple(records_out), f"{corpus.provenance}-synonym")


def _translate_with_retry(
    chain: TranslationChain, text: str, max_retries: int, backoff: float
) -> str:
    result = text
    for src, dst in chain.legs():
        for attempt in range(max_retries + 1):
            try:
                result = chain.translator.translate(result, src, dst)
                break
            except TranslationError:
                if attempt == max_retries:
                    raise
                if backoff > 0:
                    time.sleep(backoff * (2**attempt))
    return result


def back_translate(
    corpus: Corpus,
    chain: TranslationChain,
    *,
    concurrency: int = 1,
    max_retries: int = 2,
    backoff: float = 0.1,
) -> Corpus:
    """Round-trip every caption through the pivot chain and append changed results.

    A caption whose round-trip fails (after retries) is logged and kept
    without a variant; if every caption fails the whole operation errors.
    Requests run on up to ``concurrency`` worker threads; output order always
    follows input order.
    """
    captions = list(corpus.captions())

    def roundtrip(cap: Caption) -> str | None:
        try:
            return _translate_with_retry(chain, cap.raw, max_retries, backoff)
        except TranslationError as exc:
            logger.warning("back-translation failed for %r: %s", cap.image_id, exc)
            return None

    if concurrency > 1 and len(captions) > 1:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            results = list(pool.map(roundtrip, captions))
    else:
        results = [roundtrip(cap) for cap in captions]

    if captions and all(result is None for result in results):
        raise TranslationError("back-translation failed for every caption")

    cursor = 0
    records_out = []
    for record in corpus.records:
        variants = []
        for cap in record.captions:
            result = results[cursor]
            cursor += 1
            if result is not None and result.strip() and result != cap.raw:
                variants.append(Caption(record.image_id, result, CaptionSource.AUGMENTED))
        records_out.append(replace(record, captions=record.captions + tuple(variants)))
    return Corpus(tuple(records_out), f"{corpus.provenance}-backtranslated")
