"""Translation backends and hop chains for back-translation.

Two interchangeable translators: a remote HTTP client speaking the
``{"q", "source", "target"} -> {"translatedText"}`` JSON contract, and a
deterministic offline mock (token swaps plus word drops) so everything can
run without network access.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

import requests

from .exceptions import TranslationError, ValidationError


class Translator(Protocol):
    def translate(self, text: str, src: str, dst: str) -> str: ...


@dataclass(frozen=True)
class TranslationChain:
    """Pivot-language hops, implicitly starting and ending at English."""

    hops: tuple[str, ...]
    translator: Translator

    def __post_init__(self) -> None:
        if not self.hops:
            raise ValidationError("translation chain needs at least one hop")
        path = ("en", *(h.lower() for h in self.hops), "en")
        for a, b in zip(path, path[1:]):
            if a == b:
                raise ValidationError(f"consecutive identical hop {a!r} in chain")

    def legs(self) -> list[tuple[str, str]]:
        path = ("en", *(h.lower() for h in self.hops), "en")
        return list(zip(path, path[1:]))


# Small built-in table: phrase/word swaps plus dropped intensifiers. Enough to
# exercise the simplify-and-generalize behavior of a real pivot cycle.
DEFAULT_MOCK_RULES: dict[tuple[str, ...], tuple[str, ...]] = {
    ("next", "to"): ("with",),
    ("beside",): ("near",),
    ("crashing",): (),
    ("very",): (),
    ("automobile",): ("car",),
}


class MockTranslator:
    """Offline stand-in: rewrites token patterns, ignores language codes.

    ``rules`` maps a lower-case token pattern to its replacement tokens (empty
    tuple drops the pattern). With no rules this is the identity translator.
    """

    def __init__(self, rules: Mapping[Sequence[str], Sequence[str]] | None = None):
        source = DEFAULT_MOCK_RULES if rules is None else rules
        self._rules = {tuple(pat): tuple(rep) for pat, rep in source.items()}
        # longest pattern first so "next to" wins over any single-word rule
        self._patterns = sorted(self._rules, key=lambda pat: (-len(pat), pat))

    @classmethod
    def identity(cls) -> "MockTranslator":
        return cls(rules={})

    def translate(self, text: str, src: str, dst: str) -> str:
        words = text.split()
        out: list[str] = []
        i = 0
        while i < len(words):
            for pattern in self._patterns:
                window = tuple(w.lower() for w in words[i : i + len(pattern)])
                if window == pattern:
                    out.extend(self._rules[pattern])
                    i += len(pattern)
                    break
            else:
                out.append(words[i])
                i += 1
        return " ".join(out)


class HttpTranslator:
    """Client for a remote translation endpoint (LibreTranslate-style JSON)."""

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        timeout: float = 10.0,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout
        self._session = session or requests.Session()

    def translate(self, text: str, src: str, dst: str) -> str:
        payload = {"q": text, "source": src, "target": dst}
        if self.api_key:
            payload["api_key"] = self.api_key
        try:
            response = self._session.post(self.endpoint, json=payload, timeout=self.timeout)
            response.raise_for_status()
            body = response.json()
        except requests.RequestException as exc:
            raise TranslationError(f"translation request failed ({src}->{dst}): {exc}") from exc
        except ValueError as exc:
            raise TranslationError(f"translation response is not JSON ({src}->{dst})") from exc
        translated = body.get("translatedText") if isinstance(body, dict) else None
        if not isinstance(translated, str):
            raise TranslationError(f"translation response missing 'translatedText' ({src}->{dst})")
        return translated
