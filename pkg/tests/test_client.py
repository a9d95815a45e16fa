from .config import sample_scene
from .context import scene2prompt

from json import dumps, loads
from tempfile import TemporaryDirectory
from threading import Lock
from time import sleep
from unittest import TestCase

import httpx
from numpy.random import default_rng

from scene2prompt.client import EndpointConfig, ResponseCache, ask, ask_batch, backoff_delay
from scene2prompt.describe import coordinate_description
from scene2prompt.prompt import assemble_prompt, render_chat_request
from scene2prompt.utils import ConfigError, ProtocolError, TransportError


def reply(answer: str) -> dict:
    return {"id": "cmpl-0", "object": "chat.completion", "choices": [{"index": 0, "message": {"role": "assistant", "content": answer}}]}


def scripted(statuses, answer="brown"):
    """Transport answering with the given statuses in turn, recording every request."""
    seen = []

    def handler(request):
        seen.append(request)
        status = statuses[min(len(seen), len(statuses)) - 1]
        if status == 200:
            return httpx.Response(200, json=reply(answer))
        return httpx.Response(status, text="nope")

    return httpx.MockTransport(handler), seen


def no_sleep(seconds):
    pass


class TestEndpointConfig(TestCase):
    def test_validation(self):
        self.assertRaises(ConfigError, EndpointConfig, base_url="ftp://host/v1")
        self.assertRaises(ConfigError, EndpointConfig, base_url="not a url")
        self.assertRaises(ConfigError, EndpointConfig, max_retries=-1)
        self.assertRaises(ConfigError, EndpointConfig, parallelism=0)
        self.assertRaises(ConfigError, EndpointConfig, timeout=0)
        self.assertEqual(EndpointConfig(base_url="http://vlm:8000/v1/").url, "http://vlm:8000/v1/chat/completions")


class TestBackoff(TestCase):
    def test_jitter_bounds(self):
        rng = default_rng(40)
        for retry, base in ((0, 1.0), (1, 2.0), (2, 4.0)):
            for _ in range(100):
                delay = backoff_delay(retry, rng)
                self.assertGreaterEqual(delay, 0.8 * base)
                self.assertLessEqual(delay, 1.2 * base)


class TestAsk(TestCase):
    @classmethod
    def setUpClass(cls):
        scene = sample_scene()
        cls.bundle = assemble_prompt(scene, "What color is the chair?", "CT", {"CT": coordinate_description(scene)}, question_id="q0")
        cls.config = EndpointConfig(base_url="http://vlm.test/v1", api_key="secret")

    @classmethod
    def tearDownClass(cls):
        del cls.bundle
        del cls.config

    def test_happy_path(self):
        transport, seen = scripted([200])
        result = ask(self.bundle, self.config, transport, sleep=no_sleep)
        self.assertEqual(result["answer_text"], "brown")
        self.assertEqual(result["question_id"], "q0")
        self.assertEqual(len(result["attempts"]), 1)
        self.assertFalse(result["cached"])
        self.assertEqual(str(seen[0].url), "http://vlm.test/v1/chat/completions")
        self.assertEqual(seen[0].headers["authorization"], "Bearer secret")
        self.assertEqual(seen[0].content, render_chat_request(self.bundle, self.config).encode("utf-8"))

    def test_retries_server_errors(self):
        transport, seen = scripted([500, 500, 200])
        delays = []
        result = ask(self.bundle, self.config, transport, sleep=delays.append, rng=default_rng(41))
        self.assertEqual(result["answer_text"], "brown")
        self.assertEqual([a["status"] for a in result["attempts"]], [500, 500, 200])
        self.assertEqual(len(delays), 2)
        self.assertTrue(0.8 <= delays[0] <= 1.2 and 1.6 <= delays[1] <= 2.4)
        # every attempt sends the same bytes
        self.assertEqual(len({r.content for r in seen}), 1)

    def test_client_error_not_retried(self):
        transport, seen = scripted([401])
        with self.assertRaises(TransportError) as ctx:
            ask(self.bundle, self.config, transport, sleep=no_sleep)
        self.assertEqual(len(seen), 1)
        self.assertEqual(ctx.exception.status, 401)
        self.assertEqual(len(ctx.exception.attempts), 1)

    def test_retries_exhausted(self):
        transport, seen = scripted([503])
        config = EndpointConfig(base_url="http://vlm.test/v1", max_retries=2)
        with self.assertRaises(TransportError) as ctx:
            ask(self.bundle, config, transport, sleep=no_sleep)
        self.assertEqual(len(seen), 3)
        self.assertEqual([a["status"] for a in ctx.exception.attempts], [503] * 3)

    def test_timeout_retried(self):
        calls = []

        def handler(request):
            calls.append(request)
            if len(calls) == 1:
                raise httpx.ReadTimeout("slow", request=request)
            return httpx.Response(200, json=reply("two"))

        result = ask(self.bundle, self.config, httpx.MockTransport(handler), sleep=no_sleep)
        self.assertEqual(result["answer_text"], "two")
        self.assertIn("timeout", result["attempts"][0]["error"])

    def test_malformed_body(self):
        for body in (b"<html>", dumps({"choices": []}).encode(), dumps({"choices": [{"message": {"content": 3}}]}).encode()):
            transport = httpx.MockTransport(lambda request, body=body: httpx.Response(200, content=body))
            self.assertRaises(ProtocolError, ask, self.bundle, self.config, transport, sleep=no_sleep)

    def test_trims_and_joins_parts(self):
        parts = {"choices": [{"message": {"content": [{"type": "text", "text": " left "}, {"type": "text", "text": "side\n"}]}}]}
        transport = httpx.MockTransport(lambda request: httpx.Response(200, json=parts))
        self.assertEqual(ask(self.bundle, self.config, transport)["answer_text"], "left side")

    def test_zero_shot_model(self):
        scene = sample_scene()
        config = EndpointConfig(base_url="http://vlm.test/v1", inline_images=False)
        views = [f"views/{v}.png" for v in ("bev", "front", "left", "right", "back")]
        bundle = assemble_prompt(scene, "Where is the bed?", "ZS_CDT_MV", {"CDT": "To my 9 o'clock there is a <bed> [-1.20, -0.30, 0.30]."}, views)
        transport, seen = scripted([200])
        result = ask(bundle, config, transport)
        self.assertEqual(result["model"], config.zero_shot_model)
        self.assertEqual(loads(seen[0].content)["model"], config.zero_shot_model)

    def test_cache(self):
        with TemporaryDirectory() as tmp:
            config = EndpointConfig(base_url="http://vlm.test/v1", cache_dir=tmp)
            transport, seen = scripted([200])
            first = ask(self.bundle, config, transport)
            second = ask(self.bundle, config, transport)
            self.assertEqual(len(seen), 1)
            self.assertTrue(second["cached"])
            self.assertEqual(second["answer_text"], first["answer_text"])
            self.assertEqual(second["raw_response"], first["raw_response"])

            cache = ResponseCache(tmp)
            body = render_chat_request(self.bundle, config).encode("utf-8")
            self.assertTrue(cache.path(body).exists())
            self.assertEqual(cache.path(body).parent.name, "cache")

            bypass = EndpointConfig(base_url="http://vlm.test/v1", cache_dir=tmp, use_cache=False)
            self.assertFalse(ask(self.bundle, bypass, transport)["cached"])
            self.assertEqual(len(seen), 2)


class TestAskBatch(TestCase):
    @classmethod
    def setUpClass(cls):
        scene = sample_scene()
        ct = {"CT": coordinate_description(scene)}
        cls.bundles = [assemble_prompt(scene, f"Question number {i}?", "CT", ct, question_id=f"q{i}") for i in range(10)]

    @classmethod
    def tearDownClass(cls):
        del cls.bundles

    def test_order_and_parallelism(self):
        lock, state = Lock(), {"now": 0, "peak": 0}

        def handler(request):
            with lock:
                state["now"] += 1
                state["peak"] = max(state["peak"], state["now"])
            text = loads(request.content)["messages"][1]["content"]
            number = text.rsplit("number ", 1)[1].rstrip("?")
            sleep(0.02 * (10 - int(number)))
            with lock:
                state["now"] -= 1
            return httpx.Response(200, json=reply(f"answer {number}"))

        config = EndpointConfig(base_url="http://vlm.test/v1", parallelism=4)
        results = ask_batch(self.bundles, config, httpx.MockTransport(handler), sleep=no_sleep)
        self.assertEqual([r["question_id"] for r in results], [f"q{i}" for i in range(10)])
        self.assertEqual([r["answer_text"] for r in results], [f"answer {i}" for i in range(10)])
        self.assertLessEqual(state["peak"], 4)
        self.assertGreaterEqual(state["peak"], 2)

    def test_failure_is_recorded(self):
        def handler(request):
            if "number 3?" in loads(request.content)["messages"][1]["content"]:
                return httpx.Response(400, text="bad request")
            return httpx.Response(200, json=reply("ok"))

        config = EndpointConfig(base_url="http://vlm.test/v1", parallelism=3)
        results = ask_batch(self.bundles, config, httpx.MockTransport(handler), sleep=no_sleep, seed=1)
        self.assertEqual(len(results), 10)
        failed = results[3]
        self.assertIsNone(failed["answer_text"])
        self.assertEqual(failed["error_type"], "TransportError")
        self.assertEqual(len(failed["attempts"]), 1)
        self.assertTrue(all(r["answer_text"] == "ok" for i, r in enumerate(results) if i != 3))

    def test_empty(self):
        self.assertEqual(ask_batch([], EndpointConfig(base_url="http://vlm.test/v1")), [])
