import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexgen.translate import (
    CachedBackend,
    HttpBackend,
    HttpConfig,
    RetryPolicy,
    TableBackend,
    TranslationBackend,
    TranslationError,
    UnsupportedPairError,
    batch_translate,
    make_backend,
    translate,
)


class Counting(TranslationBackend):
    """Wraps a backend and counts calls; optionally slow or failing."""

    def __init__(self, inner, delay=0.0, fail=()):
        self.inner, self.delay, self.fail = inner, delay, set(fail)
        self.pairs = inner.pairs
        self.calls = 0
        self._lock = threading.Lock()

    def _fetch(self, word, src, dst):
        with self._lock:
            self.calls += 1
        time.sleep(self.delay)
        if word in self.fail:
            raise TranslationError(f"boom {word}")
        return self.inner._fetch(word, src, dst)


class TestTable:
    def test_throat_row(self, throat_backend):
        assert translate(throat_backend, "throat", "eng", "vie") == ["cổ họng"]

    def test_alternatives_in_file_order(self, throat_backend):
        assert translate(throat_backend, "gorge", "fra", "vie") == ["cổ họng", "hẻm núi"]

    def test_absent_word(self, throat_backend):
        assert translate(throat_backend, "qwerty", "eng", "vie") == []

    def test_unsupported_pair(self, throat_backend):
        with pytest.raises(UnsupportedPairError):
            translate(throat_backend, "throat", "eng", "deu")

    def test_normalizes(self):
        b = TableBackend([("eng", "vie", "Throat", " Cổ  Họng "), ("eng", "vie", "throat", "cổ họng")])
        assert translate(b, "THROAT", "eng", "vie") == ["cổ họng"]

    def test_bad_row(self, tmp_path):
        (tmp_path / "t.tsv").write_text("eng\tvie\tx\n")
        with pytest.raises(ValueError):
            TableBackend.from_file(tmp_path / "t.tsv")

    def test_deterministic_across_loads(self, fixtures):
        a = TableBackend.from_file(fixtures / "throat-table.tsv")
        b = TableBackend.from_file(fixtures / "throat-table.tsv")
        for word in ("咽頭", "gorge", "pharynx"):
            for src in ("eng", "fra", "jpn"):
                assert a.translate(word, src, "vie") == b.translate(word, src, "vie")


class TestBatch:
    def test_pointwise(self, throat_backend):
        words = ["咽頭", "咽喉", "喉"]
        got = batch_translate(throat_backend, words, "jpn", "vie")
        assert got == {w: translate(throat_backend, w, "jpn", "vie") for w in words}
        assert all(got.values())

    def test_empty(self, throat_backend):
        assert batch_translate(throat_backend, [], "eng", "vie") == {}

    def test_oov(self, throat_backend):
        assert batch_translate(throat_backend, ["throat", "zzz"], "eng", "vie")["zzz"] == []

    def test_partial_failures(self, throat_backend):
        b = Counting(throat_backend, fail={"pharynx"})
        failures = {}
        got = batch_translate(b, ["throat", "pharynx"], "eng", "vie", failures)
        assert got == {"throat": ["cổ họng"]}
        assert "pharynx" in failures
        with pytest.raises(TranslationError):
            batch_translate(b, ["pharynx"], "eng", "vie")

    @given(st.lists(st.sampled_from(["throat", "pharynx", "x", "gorge"]), max_size=6))
    def test_order_insensitive(self, throat_backend, words):
        a = batch_translate(throat_backend, words, "eng", "vie")
        b = batch_translate(throat_backend, list(reversed(words)), "eng", "vie")
        assert a == b


class TestCache:
    def test_hit_skips_inner(self, throat_backend, tmp_path):
        inner = Counting(throat_backend)
        cached = CachedBackend(inner, tmp_path / "cache.jsonl")
        first = translate(cached, "throat", "eng", "vie")
        second = translate(cached, "Throat", "eng", "vie")
        assert first == second == ["cổ họng"]
        assert inner.calls == 1

    def test_persists(self, throat_backend, tmp_path):
        path = tmp_path / "cache.jsonl"
        translate(CachedBackend(Counting(throat_backend), path), "pharynx", "eng", "vie")
        inner = Counting(throat_backend)
        again = CachedBackend(inner, path)
        assert translate(again, "pharynx", "eng", "vie") == ["họng", "hầu"]
        assert inner.calls == 0
        rec = json.loads(path.read_text().splitlines()[0])
        assert set(rec) == {"src", "dst", "word", "translations", "timestamp"}

    def test_truncated_tail_tolerated(self, throat_backend, tmp_path):
        path = tmp_path / "cache.jsonl"
        translate(CachedBackend(throat_backend, path), "throat", "eng", "vie")
        with open(path, "a") as fh:
            fh.write('{"src": "eng", "dst": "vie", "wor')
        cached = CachedBackend(throat_backend, path)
        assert cached.warnings["corrupt_cache_line"] == 1
        assert len(cached) == 1
        translate(cached, "pharynx", "eng", "vie")
        reloaded = CachedBackend(throat_backend, path)
        assert len(reloaded) == 2 and reloaded.warnings["corrupt_cache_line"] == 1

    def test_failures_not_cached(self, throat_backend, tmp_path):
        inner = Counting(throat_backend, fail={"throat"})
        cached = CachedBackend(inner, tmp_path / "c.jsonl")
        for _ in range(2):
            with pytest.raises(TranslationError):
                translate(cached, "throat", "eng", "vie")
        assert inner.calls == 2

    def test_single_flight(self, throat_backend, tmp_path):
        inner = Counting(throat_backend, delay=0.05)
        cached = CachedBackend(inner, tmp_path / "c.jsonl")
        results = []
        threads = [
            threading.Thread(target=lambda: results.append(translate(cached, "pharynx", "eng", "vie")))
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert inner.calls == 1
        assert results == [["họng", "hầu"]] * 8
        assert len((tmp_path / "c.jsonl").read_text().splitlines()) == 1

    def test_in_memory(self, throat_backend):
        cached = CachedBackend(Counting(throat_backend))
        translate(cached, "throat", "eng", "vie")
        translate(cached, "throat", "eng", "vie")
        assert cached.misses == 1


class _Handler(BaseHTTPRequestHandler):
    script: list = []
    seen: list = []

    def log_message(self, *args):
        pass

    def _reply(self):
        length = int(self.headers.get("Content-Length") or 0)
        body = json.loads(self.rfile.read(length)) if length else None
        type(self).seen.append((self.command, self.path, dict(self.headers), body))
        status, payload = type(self).script.pop(0) if type(self).script else (200, {"translations": []})
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(json.dumps(payload).encode())

    do_GET = do_POST = _reply


@pytest.fixture
def server():
    _Handler.script, _Handler.seen = [], []
    srv = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_port}", _Handler
    srv.shutdown()


def _no_sleep(log):
    return RetryPolicy(sleep=log.append)


class TestHttp:
    def test_get(self, server, monkeypatch):
        url, handler = server
        monkeypatch.setenv("LEXGEN_TEST_KEY", "s3cret")
        handler.script = [(200, {"data": [{"translations": ["Cổ họng", "họng"]}]})]
        cfg = HttpConfig(
            url_template=url + "/t?from={src}&to={dst}&q={word}",
            api_key_env="LEXGEN_TEST_KEY",
            api_key_header="X-Key",
            response_path="data.0.translations",
        )
        got = HttpBackend(cfg).translate("cổ họng", "vie", "eng")
        assert got == ["cổ họng", "họng"]
        method, path, headers, _ = handler.seen[0]
        assert method == "GET" and "q=c%E1%BB%95%20h%E1%BB%8Dng" in path
        assert headers["X-Key"] == "s3cret"

    def test_post_body(self, server):
        url, handler = server
        handler.script = [(200, {"text": "họng"})]
        cfg = HttpConfig(
            url_template=url + "/t",
            method="POST",
            request_body={"q": "{word}", "langs": ["{src}", "{dst}"]},
            response_path="text",
        )
        assert HttpBackend(cfg).translate("throat", "eng", "vie") == ["họng"]
        assert handler.seen[0][3] == {"q": "throat", "langs": ["eng", "vie"]}

    def test_retries_then_succeeds(self, server):
        url, handler = server
        handler.script = [(503, {}), (500, {}), (200, {"translations": ["x"]})]
        delays = []
        b = HttpBackend(HttpConfig(url_template=url + "/t?q={word}"), _no_sleep(delays))
        assert b.translate("w", "eng", "vie") == ["x"]
        assert delays == [0.5, 1.0]

    def test_gives_up_after_three(self, server):
        url, handler = server
        handler.script = [(503, {})] * 5
        delays = []
        b = HttpBackend(HttpConfig(url_template=url + "/t?q={word}"), _no_sleep(delays))
        with pytest.raises(TranslationError):
            b.translate("w", "eng", "vie")
        assert len(handler.seen) == 3 and delays == [0.5, 1.0]

    def test_client_error_not_retried(self, server):
        url, handler = server
        handler.script = [(404, {})]
        b = HttpBackend(HttpConfig(url_template=url + "/t?q={word}"), _no_sleep([]))
        with pytest.raises(TranslationError):
            b.translate("w", "eng", "vie")
        assert len(handler.seen) == 1

    def test_missing_key_env(self, server, monkeypatch):
        url, _ = server
        monkeypatch.delenv("LEXGEN_ABSENT", raising=False)
        b = HttpBackend(HttpConfig(url_template=url, api_key_env="LEXGEN_ABSENT"))
        with pytest.raises(TranslationError, match="LEXGEN_ABSENT"):
            b.translate("w", "eng", "vie")

    def test_pairs_from_config(self, tmp_path):
        path = tmp_path / "http.json"
        path.write_text(json.dumps({"url_template": "http://x/{word}", "pairs": [["eng", "vie"]]}))
        b = make_backend(f"http:{path}")
        assert b.supports("eng", "vie") and not b.supports("fra", "vie")


def test_make_backend(fixtures, tmp_path):
    b = make_backend(f"table:{fixtures / 'throat-table.tsv'}", cache=str(tmp_path / "c.jsonl"))
    assert isinstance(b, CachedBackend)
    assert b.supports("jpn", "vie")
    with pytest.raises(ValueError):
        make_backend("google")
