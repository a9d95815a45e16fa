from .config import error_analysis
from .context import scene2prompt

from math import exp, log, pi, sqrt, tanh
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import TestCase

import numpy.testing as npt
from numpy import array, full, inf, isfinite, uint8, zeros
from numpy.linalg import norm
from numpy.random import default_rng

from scene2prompt.hiervis import (
    HierarchyConfig, ToyVocabulary, assemble_hierarchy, backward,
    cross_attention_block, gradient_check, hierarchy_forward, init_model,
    load_checkpoint, loss_graph, numeric_gradient, patchify_stub,
    save_checkpoint, scene_token, toy_decoder_loss, train_toy, view_tokens
)
from scene2prompt.render import CameraSpec, RenderedView
from scene2prompt.utils import HierarchyError, IngestError, Point3


def small_model(dim=8, heads=2, vocab_size=6, max_answer=4, seed=0):
    return init_model(HierarchyConfig(dim=dim, heads=heads, max_answer=max_answer), vocab_size, seed)


def noisy_block(model, name, rng):
    """Block tensors with perturbed norms so the oracle sees every term."""
    params = {k: v.copy() for k, v in model.block(name).items()}
    for k in params:
        if k.startswith("ln_") or k.startswith("b"):
            params[k] = params[k] + rng.normal(0.0, 0.3, params[k].shape)
    return params


def naive_block(params, queries, keys_values, heads):
    """Row-by-row scalar reference of the pre-norm cross-attention block."""
    d = queries.shape[1]
    dh = d // heads

    def ln(x, prefix):
        mu = sum(x) / d
        var = sum((xi - mu) ** 2 for xi in x) / d
        g, b = params[f"{prefix}.gain"], params[f"{prefix}.bias"]
        return [(x[i] - mu) / sqrt(var + 1e-5) * g[i] + b[i] for i in range(d)]

    def matvec(x, w, bias=None):
        out = [sum(x[i] * w[i][j] for i in range(len(x))) for j in range(w.shape[1])]
        return out if bias is None else [o + b for o, b in zip(out, bias)]

    kvn = [ln(list(row), "ln_kv") for row in keys_values]
    keys = [matvec(r, params["wk"]) for r in kvn]
    values = [matvec(r, params["wv"]) for r in kvn]
    result = []
    for row in queries:
        q = matvec(ln(list(row), "ln_q"), params["wq"])
        o = [0.0] * d
        for h in range(heads):
            span = range(h * dh, (h + 1) * dh)
            scores = [sum(q[i] * k[i] for i in span) / sqrt(dh) for k in keys]
            top = max(scores)
            e = [exp(s - top) for s in scores]
            a = [x / sum(e) for x in e]
            for i in span:
                o[i] = sum(a[j] * values[j][i] for j in range(len(keys)))
        x1 = [r + v for r, v in zip(row, matvec(o, params["wo"], params["bo"]))]
        hpre = matvec(ln(x1, "ln_ff"), params["w1"], params["b1"])
        act = [0.5 * x * (1.0 + tanh(sqrt(2.0 / pi) * (x + 0.044715 * x ** 3))) for x in hpre]
        result.append([a + b for a, b in zip(x1, matvec(act, params["w2"], params["b2"]))])
    return array(result)


def split_view(grid_px=28):
    """Left half red, right half blue, depth 2 except one empty column."""
    image = zeros((grid_px, grid_px, 3), dtype=uint8)
    image[:, :grid_px // 2, 0] = 255
    image[:, grid_px // 2:, 2] = 255
    depth = full((grid_px, grid_px), 2.0)
    depth[:, -1] = inf
    camera = CameraSpec("orthographic_topdown", Point3(0, 0, 5), Point3(0, 0, 0), (0.0, 1.0, 0.0), ortho_extent=1.0, view_id="bev")
    return RenderedView("bev", camera, image, depth)


class TestHierarchyConfig(TestCase):
    def test_validation(self):
        self.assertRaises(HierarchyError, HierarchyConfig, dim=10, heads=4)
        self.assertRaises(HierarchyError, HierarchyConfig, grid=0)
        config = HierarchyConfig()
        self.assertEqual((config.dim, config.heads, config.views, config.grid), (64, 4, 5, 14))

    def test_init_model(self):
        model = small_model()
        self.assertEqual(model.dim, 8)
        self.assertEqual(model.views, 5)
        self.assertEqual(model.vocab_size, 6)
        self.assertEqual(model.max_answer, 4)
        self.assertIn("query.scene", model.names())
        self.assertEqual(model.block("view")["w1"].shape, (8, 32))
        self.assertRaises(HierarchyError, model.block, "encoder")
        self.assertRaises(HierarchyError, init_model, None, 1)
        other = small_model()
        for name in model.names():
            npt.assert_array_equal(model.params[name], other.params[name])


class TestToyVocabulary(TestCase):
    def test_vocabulary(self):
        vocab = ToyVocabulary.from_texts(["The brown chair.", "Is the bed to my left?"])
        self.assertEqual(vocab.tokens[:2], ["<bos>", "<unk>"])
        self.assertEqual((vocab.bos, vocab.unk), (0, 1))
        ids = vocab.encode("the brown sofa")
        self.assertEqual(ids[2], vocab.unk)
        self.assertEqual(vocab.decode(ids[:2]), "the brown")
        self.assertIn("<|view_start|>", vocab.tokens)
        self.assertEqual(len(vocab), len(set(vocab.tokens)))


class TestCrossAttentionBlock(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.model = small_model()
        cls.rng = default_rng(20)

    @classmethod
    def tearDownClass(cls):
        del cls.model
        del cls.rng

    def test_weights_are_a_distribution(self):
        queries, kv = self.rng.normal(size=(3, 8)), self.rng.normal(size=(7, 8))
        out, A = cross_attention_block(self.model.block("view"), queries, kv, heads=2, weights=True)
        self.assertEqual(out.shape, (3, 8))
        self.assertEqual(A.shape, (2, 3, 7))
        self.assertTrue((A >= 0.0).all())
        npt.assert_allclose(A.sum(axis=-1), 1.0, atol=1e-12)

    def test_single_key(self):
        _, A = cross_attention_block(self.model.block("scene"), self.rng.normal(size=(2, 8)), self.rng.normal(size=(1, 8)), heads=2, weights=True)
        npt.assert_allclose(A, 1.0)

    def test_mask(self):
        mask = array([[True, False, False], [True, True, False]])
        _, A = cross_attention_block(self.model.block("decoder"), self.rng.normal(size=(2, 8)), self.rng.normal(size=(3, 8)), heads=2, mask=mask, weights=True)
        self.assertTrue((A[:, 0, 1:] == 0.0).all())
        self.assertTrue((A[:, 1, 2] == 0.0).all())
        npt.assert_allclose(A.sum(axis=-1), 1.0, atol=1e-12)

    def test_scalar_oracle(self):
        for name in ("view", "scene", "decoder"):
            params = noisy_block(self.model, name, self.rng)
            queries, kv = self.rng.normal(size=(2, 8)), self.rng.normal(size=(5, 8))
            npt.assert_allclose(cross_attention_block(params, queries, kv, heads=2), naive_block(params, queries, kv, 2), rtol=1e-10, atol=1e-10)

    def test_errors(self):
        block = self.model.block("view")
        self.assertRaises(HierarchyError, cross_attention_block, block, zeros((1, 6)), zeros((3, 8)), heads=2)
        self.assertRaises(HierarchyError, cross_attention_block, block, zeros((1, 8)), zeros((0, 8)), heads=2)
        self.assertRaises(HierarchyError, cross_attention_block, block, zeros((1, 8)), zeros((3, 8)), heads=3)


class TestHierarchy(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.model = small_model()
        cls.patches = default_rng(21).normal(size=(5, 4, 8))

    @classmethod
    def tearDownClass(cls):
        del cls.model
        del cls.patches

    def test_view_locality(self):
        base = view_tokens(self.model, self.patches)
        changed = self.patches.copy()
        changed[2] = default_rng(29).normal(size=changed[2].shape)
        result = view_tokens(self.model, changed)
        for m in (0, 1, 3, 4):
            npt.assert_array_equal(result[m], base[m])
        self.assertGreater(norm(result[2] - base[2]), 1e-6)

    def test_scene_token_permutation(self):
        tokens = view_tokens(self.model, self.patches)
        base = scene_token(self.model, tokens)
        self.assertEqual(base.shape, (1, 8))
        rng = default_rng(22)
        for _ in range(10):
            npt.assert_allclose(scene_token(self.model, tokens[rng.permutation(5)]), base, atol=1e-12)

    def test_sequence_layout(self):
        for n in (4, 196):
            patches, tokens, scene = zeros((5, n, 8)), default_rng(n).normal(size=(5, 8)), default_rng(n + 1).normal(size=8)
            hierarchy = assemble_hierarchy(patches, tokens, scene)
            self.assertEqual(len(hierarchy), 5 * n + 6)
            self.assertEqual(hierarchy.patches_per_view, n)
            npt.assert_array_equal(hierarchy.f_v[5 * n], tokens[0])
            npt.assert_array_equal(hierarchy.f_v[-1], scene)
        self.assertEqual(len(assemble_hierarchy(zeros((5, 196, 8)), zeros((5, 8)), zeros(8))), 986)

    def test_forward(self):
        hierarchy = hierarchy_forward(self.model, self.patches)
        self.assertEqual(hierarchy.f_v.shape, (26, 8))
        npt.assert_array_equal(hierarchy.f_v[:4], self.patches[0])
        npt.assert_array_equal(hierarchy.view_tokens, view_tokens(self.model, self.patches))

    def test_errors(self):
        self.assertRaises(HierarchyError, view_tokens, self.model, zeros((4, 4, 8)))
        self.assertRaises(HierarchyError, view_tokens, self.model, zeros((5, 0, 8)))
        self.assertRaises(HierarchyError, scene_token, self.model, zeros((3, 8)))
        self.assertRaises(HierarchyError, assemble_hierarchy, zeros((5, 4, 8)), zeros((5, 6)), zeros(8))


class TestToyDecoderLoss(TestCase):
    def test_uniform_loss(self):
        model = small_model(vocab_size=2)
        model.params["decoder.w_out"][:] = 0.0
        model.params["decoder.b_out"][:] = 0.0
        hierarchy = hierarchy_forward(model, default_rng(23).normal(size=(5, 2, 8)))
        for targets in ([1], [0, 1], [1, 1, 0, 1]):
            loss, picked = toy_decoder_loss(model, hierarchy, targets)
            self.assertAlmostEqual(loss, len(targets) * log(2.0), places=12)
            npt.assert_allclose(picked, -log(2.0))

    def test_errors(self):
        model = small_model()
        hierarchy = hierarchy_forward(model, zeros((5, 2, 8)))
        self.assertRaises(HierarchyError, toy_decoder_loss, model, hierarchy, [6])
        self.assertRaises(HierarchyError, toy_decoder_loss, model, hierarchy, [1], [-1])
        self.assertRaises(HierarchyError, toy_decoder_loss, model, hierarchy, [])
        self.assertRaises(HierarchyError, toy_decoder_loss, model, hierarchy, [1, 2, 3, 4, 5])

    def test_causal(self):
        # the first position cannot see later targets
        model = small_model()
        patches = default_rng(24).normal(size=(5, 2, 8))
        hierarchy = hierarchy_forward(model, patches)
        _, a = toy_decoder_loss(model, hierarchy, [2, 3, 4])
        _, b = toy_decoder_loss(model, hierarchy, [2, 5, 1])
        self.assertAlmostEqual(a[0], b[0], places=12)
        self.assertAlmostEqual(a[1], toy_decoder_loss(model, hierarchy, [2, 3, 1])[1][1], places=12)


class TestBackward(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.model = small_model()
        rng = default_rng(25)
        cls.example = (rng.normal(size=(5, 2, 8)), [3, 5], [2, 4, 1])

    @classmethod
    def tearDownClass(cls):
        del cls.model
        del cls.example

    def test_gradient_check(self):
        before = {k: v.copy() for k, v in self.model.params.items()}
        errors = gradient_check(self.model, self.example)
        self.assertEqual(sorted(errors), self.model.names())
        analytic = backward(loss_graph(self.model, *self.example))
        for name, error in errors.items():
            error_analysis(name, "gradient", f"{error:.2e}")
            if error >= 1e-4:
                # near-zero tensors: compare absolutely
                numeric = numeric_gradient(self.model, self.example, name)
                self.assertLess(norm(analytic[name] - numeric), 1e-7, name)
        for name, value in before.items():
            npt.assert_array_equal(self.model.params[name], value)

    def test_random_instances(self):
        rng = default_rng(28)
        for seed in range(10):
            model = small_model(dim=8, heads=4, vocab_size=7, seed=seed)
            L, nc, per_view = int(rng.integers(1, 5)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
            example = (rng.normal(size=(5, per_view, 8)), rng.integers(1, 7, L).tolist(), rng.integers(0, 7, nc).tolist())
            analytic = backward(loss_graph(model, *example))
            for name, error in gradient_check(model, example).items():
                if error >= 1e-4:
                    numeric = numeric_gradient(model, example, name)
                    self.assertLess(norm(analytic[name] - numeric), 1e-7, f"seed {seed}: {name}")

    def test_unused_parameters(self):
        grads = backward(loss_graph(self.model, *self.example))
        # inputs are <bos> and 3, context 2, 4 and 1: token 5 is never embedded
        npt.assert_array_equal(grads["decoder.embed"][5], zeros(8))
        self.assertGreater(norm(grads["decoder.embed"][3]), 0.0)
        # two targets use two of the four positions
        npt.assert_array_equal(grads["decoder.pos"][2:], zeros((2, 8)))
        npt.assert_array_equal(numeric_gradient(self.model, self.example, "decoder.embed")[5], zeros(8))

    def test_scale(self):
        graph = loss_graph(self.model, *self.example)
        once, twice = backward(graph), backward(graph, scale=2.0)
        for name in once:
            npt.assert_allclose(twice[name], 2.0 * once[name], rtol=1e-12, atol=1e-15)

    def test_shapes(self):
        grads = backward(loss_graph(self.model, *self.example))
        for name, value in self.model.params.items():
            self.assertEqual(grads[name].shape, value.shape)
            self.assertTrue(isfinite(grads[name]).all())
        self.assertGreater(norm(grads["query.view"]), 0.0)

    def test_requires_graph(self):
        self.assertRaises(HierarchyError, backward, None)


class TestTrainToy(TestCase):
    def test_zero_learning_rate(self):
        rng = default_rng(26)
        examples = [(rng.normal(size=(5, 2, 8)), [2, 3], [4])]
        losses, model = train_toy(examples, steps=5, lr=0.0, config=HierarchyConfig(dim=8, heads=2, max_answer=4), vocab_size=6)
        self.assertEqual(losses.shape, (5,))
        self.assertTrue((losses == losses[0]).all())

    def test_memorizes(self):
        rng = default_rng(27)
        examples = [
            {"patches": rng.normal(size=(5, 4, 32)), "targets": list(range(2, 10)), "context": [1]},
            {"patches": rng.normal(size=(5, 4, 32)), "targets": list(range(10, 18)), "context": [0]},
        ]
        config = HierarchyConfig(dim=32, heads=4, max_answer=8)
        losses, model = train_toy(examples, steps=400, lr=0.02, config=config, vocab_size=18, seed=1)
        error_analysis("train_toy", "loss", f"{losses[0]:.3f} -> {losses[-1]:.3f}")
        self.assertLess(losses[-1], 0.1 * losses[0])
        self.assertEqual(model.vocab_size, 18)

    def test_deterministic(self):
        rng = default_rng(28)
        examples = [(rng.normal(size=(5, 2, 8)), [2, 3])]
        config = HierarchyConfig(dim=8, heads=2, max_answer=4)
        a, _ = train_toy(examples, steps=3, config=config, vocab_size=5)
        b, _ = train_toy(examples, steps=3, config=config, vocab_size=5)
        npt.assert_array_equal(a, b)

    def test_non_finite(self):
        model = small_model(vocab_size=2)
        model.params["decoder.b_out"][:] = (1e308, -1e308)
        with self.assertRaises(HierarchyError) as ctx:
            train_toy([(zeros((5, 2, 8)), [1])], steps=3, model=model)
        self.assertEqual(ctx.exception.step, 0)

    def test_errors(self):
        self.assertRaises(HierarchyError, train_toy, [])


class TestCheckpoint(TestCase):
    def test_round_trip(self):
        model = small_model(seed=3)
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "model.hvc"
            self.assertTrue(save_checkpoint(path, model))
            self.assertFalse(save_checkpoint(path, model))
            loaded = load_checkpoint(path)
            self.assertEqual(loaded.heads, model.heads)
            self.assertEqual(loaded.names(), model.names())
            for name in model.names():
                self.assertEqual(loaded.params[name].tobytes(), model.params[name].tobytes())

            path.write_bytes(b"XXXX" + path.read_bytes()[4:])
            self.assertRaises(IngestError, load_checkpoint, path)
            path.write_bytes(b"HVC")
            self.assertRaises(IngestError, load_checkpoint, path)
            self.assertRaises(IngestError, load_checkpoint, Path(tmp) / "missing.hvc")


class TestPatchifyStub(TestCase):
    def test_red_blue_halves(self):
        features = patchify_stub(split_view(), grid=2, dim=8)
        self.assertEqual(features.shape, (4, 8))
        npt.assert_allclose(features[0], [1, 0, 0, 2.0, 0.25, 0.25, 0, 0])
        npt.assert_allclose(features[1], [0, 0, 1, 2.0, 0.75, 0.25, 0, 0])
        npt.assert_allclose(features[2], [1, 0, 0, 2.0, 0.25, 0.75, 0, 0])

    def test_cell_oracle(self):
        view = split_view()
        grid, cell = 7, 4
        features = patchify_stub(view, grid=grid, dim=6)
        for i in range(grid):
            for j in range(grid):
                block = view.image[i * cell:(i + 1) * cell, j * cell:(j + 1) * cell].astype(float) / 255.0
                depth = [d for d in view.depth[i * cell:(i + 1) * cell, j * cell:(j + 1) * cell].reshape(-1) if d < inf]
                expected = list(block.reshape(-1, 3).mean(axis=0)) + [sum(depth) / len(depth) if depth else 0.0, (j + 0.5) / grid, (i + 0.5) / grid]
                npt.assert_allclose(features[i * grid + j], expected, atol=1e-12)

    def test_lift(self):
        view = split_view()
        a, b = patchify_stub(view, grid=2, dim=4, seed=5), patchify_stub(view, grid=2, dim=4, seed=5)
        self.assertEqual(a.shape, (4, 4))
        npt.assert_array_equal(a, b)

    def test_grid_must_divide(self):
        self.assertRaises(HierarchyError, patchify_stub, split_view(), grid=5)
