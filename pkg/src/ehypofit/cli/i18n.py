"""Message catalogue for the CLI.

Each locale is a YAML tree under ``locales/``; it is flattened into dotted keys on load.
Keys missing from a non-English catalogue fall back to the English message.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)

DEFAULT_LOCALE = "en"
LOCALES_DIR = Path(__file__).parent / "locales"


def available_locales() -> list[str]:
    """Return the locale codes that have a catalogue file, sorted."""
    return sorted(path.stem for path in LOCALES_DIR.glob("*.yaml"))


def _flatten(tree: dict[str, Any], prefix: str = "") -> dict[str, str]:
    messages: dict[str, str] = {}
    for name, value in tree.items():
        if isinstance(value, dict):
            messages.update(_flatten(value, f"{prefix}{name}."))
        elif isinstance(value, str):
            messages[f"{prefix}{name}"] = value
    return messages


def _read(locale: str) -> dict[str, str]:
    try:
        tree = yaml.safe_load((LOCALES_DIR / f"{locale}.yaml").read_text(encoding="utf-8")) or {}
    except (OSError, yaml.YAMLError) as e:
        logger.warning("Failed to load locale %s: %s", locale, e)
        return {}
    return _flatten(tree)


@dataclass(frozen=True)
class Catalogue:
    """Messages of one locale, keyed by dotted path, with English as the fallback."""

    locale: str
    messages: dict[str, str] = field(default_factory=dict)
    fallback: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, locale: str) -> Catalogue:
        if locale not in available_locales():
            logger.warning("Locale file not found: %s, falling back to '%s'", locale, DEFAULT_LOCALE)
            locale = DEFAULT_LOCALE
        messages = _read(locale)
        fallback = messages if locale == DEFAULT_LOCALE else _read(DEFAULT_LOCALE)
        logger.debug("Loaded locale %s with %d messages", locale, len(messages))
        return cls(locale=locale, messages=messages, fallback=fallback)

    def keys(self) -> set[str]:
        return set(self.messages)

    def lookup(self, key: str) -> str | None:
        return self.messages.get(key, self.fallback.get(key))


_catalogue: Catalogue | None = None


def catalogue() -> Catalogue:
    """Return the active catalogue, loading the default locale on first use."""
    global _catalogue  # noqa: PLW0603
    if _catalogue is None:
        _catalogue = Catalogue.load(DEFAULT_LOCALE)
    return _catalogue


def load_locale(locale: str = DEFAULT_LOCALE) -> None:
    """Activate a locale; unknown codes fall back to English.

    Args:
        locale: Language code, one of ``available_locales()``.
    """
    global _catalogue  # noqa: PLW0603
    _catalogue = Catalogue.load(locale)


def get_locale() -> str:
    """Return the code of the active locale."""
    return catalogue().locale


def t(key: str, **kwargs: Any) -> str:
    """Look up a dotted key and format it with ``kwargs``.

    Returns:
        The message, the unformatted template when a placeholder has no argument,
        or the key itself when no catalogue has the message.
    """
    template = catalogue().lookup(key)
    if template is None:
        logger.debug("Translation not found for key: %s", key)
        return key
    try:
        return template.format(**kwargs)
    except KeyError as e:
        logger.warning("Missing format key %s for translation: %s", e, key)
        return template
