"""Word translation backends.

* :class:`TableBackend` reads a TSV table ``src<TAB>dst<TAB>word<TAB>translation``
  (repeat a row per alternative). Deterministic; used by all tests.
* :class:`HttpBackend` calls a configurable JSON web API.
* :class:`CachedBackend` wraps any backend with an append-only JSON-lines
  cache and fetches each key at most once, even under concurrent callers.
"""
from __future__ import annotations

import json
import logging
import os
import threading
import time
import urllib.parse
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional

from lexgen.dictionary import normalize_text

logger = logging.getLogger(__name__)


class UnsupportedPairError(ValueError):
    pass


class TranslationError(RuntimeError):
    """The backend failed to produce an answer (after retries)."""


class TranslationBackend:
    """Base class. Subclasses implement :meth:`_fetch`.

    ``pairs`` is the set of supported (source, target) pairs; ``None`` means
    any pair is accepted.
    """

    pairs: Optional[frozenset] = None

    def supports(self, src: str, dst: str) -> bool:
        return self.pairs is None or (src, dst) in self.pairs

    def translate(self, word: str, src: str, dst: str) -> list[str]:
        if not self.supports(src, dst):
            raise UnsupportedPairError(f"{type(self).__name__} does not translate {src}->{dst}")
        return _clean(self._fetch(normalize_text(word), src, dst))

    def _fetch(self, word: str, src: str, dst: str) -> list[str]:
        raise NotImplementedError


def _clean(values: Iterable[str]) -> list[str]:
    out: list[str] = []
    for value in values:
        value = normalize_text(value)
        if value and value not in out:
            out.append(value)
    return out


def translate(backend: TranslationBackend, word: str, src: str, dst: str) -> list[str]:
    return backend.translate(word, src, dst)


def batch_translate(
    backend: TranslationBackend,
    words: Iterable[str],
    src: str,
    dst: str,
    failures: Optional[dict] = None,
) -> dict[str, list[str]]:
    """Translate each word independently.

    A word whose translation fails is left out of the result and recorded in
    ``failures`` (word -> error message); without a ``failures`` dict the
    first error propagates.
    """
    if not backend.supports(src, dst):
        raise UnsupportedPairError(f"{type(backend).__name__} does not translate {src}->{dst}")
    out = {}
    for word in words:
        try:
            out[word] = backend.translate(word, src, dst)
        except TranslationError as exc:
            if failures is None:
                raise
            failures[word] = str(exc)
    return out


class TableBackend(TranslationBackend):
    def __init__(self, rows: Iterable[tuple[str, str, str, str]], pairs: Optional[Iterable] = None):
        table: dict[tuple[str, str, str], list[str]] = {}
        seen_pairs = set()
        for src, dst, word, translation in rows:
            key = (src, dst, normalize_text(word))
            table.setdefault(key, []).append(translation)
            seen_pairs.add((src, dst))
        self._table = {k: _clean(v) for k, v in table.items()}
        self.pairs = frozenset(pairs) if pairs is not None else frozenset(seen_pairs)

    @classmethod
    def from_file(cls, path) -> "TableBackend":
        rows = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n").rstrip("\r")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 4:
                    raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields, got {len(fields)}")
                rows.append(tuple(f.strip() for f in fields))
        return cls(rows)

    def _fetch(self, word, src, dst):
        return self._table.get((src, dst, word), [])


@dataclass
class RetryPolicy:
    attempts: int = 3
    initial_delay: float = 0.5
    factor: float = 2.0
    sleep: Callable[[float], None] = time.sleep

    def delays(self):
        delay = self.initial_delay
        for _ in range(self.attempts - 1):
            yield delay
            delay *= self.factor


@dataclass
class HttpConfig:
    """Endpoint description for :class:`HttpBackend`.

    ``url_template`` and string values inside ``request_body`` may use the
    placeholders ``{word}``, ``{src}`` and ``{dst}``. ``response_path`` is a
    dotted path into the JSON reply (integers index lists) that must reach a
    string or a list of strings. The API key is read from the environment
    variable named by ``api_key_env`` and sent as ``api_key_header``.
    """

    url_template: str
    method: str = "GET"
    headers: dict = field(default_factory=dict)
    api_key_env: Optional[str] = None
    api_key_header: str = "Authorization"
    api_key_prefix: str = ""
    request_body: Optional[Any] = None
    response_path: str = "translations"
    pairs: Optional[list] = None
    timeout: float = 10.0

    @classmethod
    def from_file(cls, path) -> "HttpConfig":
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))


def _fill(template, values: Mapping[str, str]):
    if isinstance(template, str):
        return template.format(**values)
    if isinstance(template, list):
        return [_fill(x, values) for x in template]
    if isinstance(template, dict):
        return {k: _fill(v, values) for k, v in template.items()}
    return template


def _dig(obj, path: str):
    for part in path.split(".") if path else []:
        obj = obj[int(part)] if isinstance(obj, list) else obj[part]
    if isinstance(obj, str):
        return [obj]
    if not isinstance(obj, list):
        raise TypeError(f"response path {path!r} does not reach a list")
    return [str(x) for x in obj]


class HttpBackend(TranslationBackend):
    _RETRY_STATUS = {408, 429, 500, 502, 503, 504}

    def __init__(self, config: HttpConfig, retry: Optional[RetryPolicy] = None):
        import requests

        self._requests = requests
        self.config = config
        self.retry = retry or RetryPolicy()
        self.pairs = frozenset(tuple(p) for p in config.pairs) if config.pairs else None
        self._local = threading.local()

    def _session(self):
        session = getattr(self._local, "session", None)
        if session is None:
            session = self._local.session = self._requests.Session()
        return session

    def _headers(self) -> dict:
        headers = dict(self.config.headers)
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env)
            if key is None:
                raise TranslationError(f"environment variable {self.config.api_key_env} is not set")
            headers[self.config.api_key_header] = self.config.api_key_prefix + key
        return headers

    def _fetch(self, word, src, dst):
        cfg = self.config
        url = cfg.url_template.format(word=urllib.parse.quote(word), src=src, dst=dst)
        body = _fill(cfg.request_body, {"word": word, "src": src, "dst": dst})
        delays = self.retry.delays()
        while True:
            try:
                resp = self._session().request(
                    cfg.method, url, json=body, headers=self._headers(), timeout=cfg.timeout
                )
                if resp.status_code in self._RETRY_STATUS:
                    raise self._requests.HTTPError(f"HTTP {resp.status_code}", response=resp)
                if resp.status_code >= 400:
                    # not worth retrying
                    raise TranslationError(f"{src}->{dst} {word!r}: HTTP {resp.status_code}")
                return _dig(resp.json(), cfg.response_path)
            except (self._requests.RequestException, ValueError) as exc:
                delay = next(delays, None)
                if delay is None:
                    raise TranslationError(f"{src}->{dst} {word!r}: {exc}") from exc
                logger.debug("retrying %s->%s %r in %.2fs: %s", src, dst, word, delay, exc)
                self.retry.sleep(delay)
            except (KeyError, IndexError, TypeError) as exc:
                raise TranslationError(f"{src}->{dst} {word!r}: bad response: {exc}") from exc


class CachedBackend(TranslationBackend):
    """Persistent cache in front of another backend.

    Records are JSON lines ``{"src", "dst", "word", "translations", "timestamp"}``.
    Unparseable lines (typically a truncated last write) are skipped and
    counted in ``warnings["corrupt_cache_line"]``. Failures are not cached.
    """

    def __init__(self, inner: TranslationBackend, path=None):
        self.inner = inner
        self.pairs = inner.pairs
        self.path = Path(path) if path else None
        self.warnings: Counter = Counter()
        self.misses = 0
        self._store: dict[tuple[str, str, str], list[str]] = {}
        self._write_lock = threading.Lock()
        self._key_locks: dict[tuple, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def supports(self, src, dst):
        return self.inner.supports(src, dst)

    def __len__(self):
        return len(self._store)

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                try:
                    rec = json.loads(line)
                    key = (rec["src"], rec["dst"], rec["word"])
                    self._store.setdefault(key, _clean(rec["translations"]))
                except (ValueError, KeyError, TypeError):
                    self.warnings["corrupt_cache_line"] += 1

    def _append(self, key, value):
        if self.path is None:
            return
        rec = {"src": key[0], "dst": key[1], "word": key[2], "translations": value, "timestamp": int(time.time())}
        with self._write_lock:
            needs_newline = False
            if self.path.exists() and self.path.stat().st_size:
                with open(self.path, "rb") as fh:
                    fh.seek(-1, os.SEEK_END)
                    needs_newline = fh.read(1) != b"\n"
            with open(self.path, "a", encoding="utf-8") as fh:
                if needs_newline:
                    fh.write("\n")
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")

    def _fetch(self, word, src, dst):
        key = (src, dst, word)
        if key in self._store:
            return list(self._store[key])
        with self._locks_guard:
            lock = self._key_locks.setdefault(key, threading.Lock())
        with lock:
            if key in self._store:
                return list(self._store[key])
            value = self.inner.translate(word, src, dst)
            self.misses += 1
            self._store[key] = value
            self._append(key, value)
        return list(value)


def make_backend(text: str, cache: Optional[str] = None) -> TranslationBackend:
    """Build a backend from ``table:PATH`` or ``http:CONFIG.json``."""
    kind, _, arg = text.partition(":")
    if kind == "table" and arg:
        backend: TranslationBackend = TableBackend.from_file(arg)
    elif kind == "http" and arg:
        backend = HttpBackend(HttpConfig.from_file(arg))
    else:
        raise ValueError(f"backend must be table:PATH or http:CONFIG, got {text!r}")
    if cache:
        backend = CachedBackend(backend, cache)
    return backend
