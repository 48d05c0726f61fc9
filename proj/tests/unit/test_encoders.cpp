#include <doctest.h>

#include <numeric>

#include "gad/encoders/encoder.hpp"
#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"
#include "test_support.hpp"

using namespace gad;
using gad::testing::random_graph;
using gad::testing::random_matrix;

namespace {

SparseAdjacency path3() {
    const std::pair<NodeId, NodeId> edges[] = {{0, 1}, {1, 2}};
    return SparseAdjacency::from_edges(3, edges);
}

EncoderConfig scalar_config(EncoderKind kind) {
    EncoderConfig c;
    c.kind = kind;
    c.input_dim = 1;
    c.embedding_dim = 1;
    c.layers = 1;
    return c;
}

EncoderConfig small_config(EncoderKind kind, std::size_t in = 5, std::size_t out = 4) {
    EncoderConfig c;
    c.kind = kind;
    c.input_dim = in;
    c.embedding_dim = out;
    return c;
}

DenseMatrix permute_rows(const DenseMatrix& m, const std::vector<std::size_t>& perm) {
    // row v moves to perm[v]
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t v = 0; v < m.rows(); ++v)
        for (std::size_t c = 0; c < m.cols(); ++c) out(perm[v], c) = m(v, c);
    return out;
}

}  // namespace

TEST_CASE("gin on a path: neighbor sums plus self") {
    ParameterStore s;
    s.add("enc.l0.w1", DenseMatrix{{1}});
    s.add("enc.l0.b1", DenseMatrix{{0}});
    s.add("enc.l0.w2", DenseMatrix{{1}});
    s.add("enc.l0.b2", DenseMatrix{{0}});
    const DenseMatrix h = encode(path3(), DenseMatrix{{1}, {2}, {3}}, s, scalar_config(EncoderKind::gin));
    CHECK(h == DenseMatrix{{3}, {6}, {5}});
}

TEST_CASE("gin epsilon weighs the node's own features") {
    ParameterStore s;
    s.add("enc.l0.w1", DenseMatrix{{1}});
    s.add("enc.l0.b1", DenseMatrix{{0}});
    s.add("enc.l0.w2", DenseMatrix{{1}});
    s.add("enc.l0.b2", DenseMatrix{{0}});
    EncoderConfig c = scalar_config(EncoderKind::gin);
    c.gin_eps = 0.5;
    CHECK(encode(path3(), DenseMatrix{{1}, {2}, {3}}, s, c) == DenseMatrix{{3.5}, {7}, {6.5}});
}

TEST_CASE("gin on an isolated node applies the MLP to its own features") {
    ParameterStore s;
    EncoderConfig c = small_config(EncoderKind::gin, 3, 3);
    c.layers = 1;
    init_encoder(s, c, 1);
    const auto adj = SparseAdjacency::from_edges(1, {});
    const DenseMatrix x = random_matrix(1, 3, 2);
    DenseMatrix hidden = matmul(x, s.get("enc.l0.w1")) + s.get("enc.l0.b1");
    for (double& v : hidden.values()) v = std::max(v, 0.0);
    const DenseMatrix expect = matmul(hidden, s.get("enc.l0.w2")) + s.get("enc.l0.b2");
    CHECK(max_abs_diff(encode(adj, x, s, c), expect) < 1e-14);
}

TEST_CASE("gin gives connected twins with equal features equal embeddings") {
    ParameterStore s;
    const EncoderConfig c = small_config(EncoderKind::gin, 2, 3);
    init_encoder(s, c, 3);
    const std::pair<NodeId, NodeId> edge[] = {{0, 1}};
    const DenseMatrix h = encode(SparseAdjacency::from_edges(2, edge), DenseMatrix{{0.3, -1}, {0.3, -1}}, s, c);
    CHECK(max_abs_diff(DenseMatrix{{h(0, 0), h(0, 1), h(0, 2)}}, DenseMatrix{{h(1, 0), h(1, 1), h(1, 2)}}) == 0.0);
}

TEST_CASE("gcn on a path: ReLU of the self-inclusive mean") {
    ParameterStore s;
    s.add("enc.l0.w", DenseMatrix{{1}});
    CHECK(encode(path3(), DenseMatrix{{1}, {2}, {3}}, s, scalar_config(EncoderKind::gcn)) ==
          DenseMatrix{{1.5}, {2}, {2.5}});
    CHECK(encode(path3(), DenseMatrix{{-1}, {-2}, {-3}}, s, scalar_config(EncoderKind::gcn)) == DenseMatrix(3, 1));
}

TEST_CASE("gcn with constant features gives identical first-layer outputs") {
    ParameterStore s;
    EncoderConfig c = small_config(EncoderKind::gcn, 3, 4);
    c.layers = 1;
    init_encoder(s, c, 4);
    const DenseMatrix h = encode(random_graph(9, 0.4, 5), DenseMatrix(9, 3, 0.7), s, c);
    for (std::size_t v = 1; v < 9; ++v)
        for (std::size_t j = 0; j < 4; ++j) CHECK(h(v, j) == h(0, j));
}

TEST_CASE("gat with a zero attention vector reduces to mean aggregation") {
    ParameterStore s;
    s.add("enc.l0.w", DenseMatrix{{1}});
    s.add("enc.l0.attn", DenseMatrix(2, 1));
    const DenseMatrix h = encode(path3(), DenseMatrix{{1}, {2}, {3}}, s, scalar_config(EncoderKind::gat));
    CHECK(max_abs_diff(h, DenseMatrix{{1.5}, {2}, {2.5}}) < 1e-15);
}

TEST_CASE("gat on an isolated node attends only to itself") {
    ParameterStore s;
    EncoderConfig c = small_config(EncoderKind::gat, 3, 2);
    c.layers = 1;
    init_encoder(s, c, 6);
    const DenseMatrix x = random_matrix(1, 3, 7);
    CHECK(max_abs_diff(encode(SparseAdjacency::from_edges(1, {}), x, s, c), matmul(x, s.get("enc.l0.w"))) < 1e-15);
}

TEST_CASE("merge operators") {
    Tape t;
    const DenseMatrix h = random_matrix(4, 3, 8);
    DenseMatrix abs_h = h;
    for (double& v : abs_h.values()) v = std::abs(v);
    Var a = t.constant(abs_h), b = t.constant(abs_h * -1.0);
    const Var pair[] = {a, b};
    CHECK(merge_embeddings(pair, MergeOp::mean).value() == DenseMatrix(4, 3));
    CHECK(merge_embeddings(pair, MergeOp::max).value() == abs_h);
    const Var same[] = {a, a};
    CHECK(merge_embeddings(same, MergeOp::mean).value() == abs_h);
    const double w[] = {0.25, 0.75};
    CHECK(max_abs_diff(merge_embeddings(pair, MergeOp::weighted_mean, w).value(), abs_h * -0.5) < 1e-15);
    const Var one[] = {a};
    CHECK(merge_embeddings(one, MergeOp::mean).value() == abs_h);
    Var wrong = t.constant(DenseMatrix(4, 2));
    const Var mismatched[] = {a, wrong};
    CHECK_THROWS_AS(merge_embeddings(mismatched, MergeOp::mean), ShapeError);
}

TEST_CASE("a single-member multi-encoder equals that member exactly") {
    for (EncoderKind kind : {EncoderKind::gin, EncoderKind::gat, EncoderKind::gcn}) {
        EncoderConfig multi = small_config(EncoderKind::multi);
        multi.members = {kind};
        ParameterStore s;
        init_encoder(s, multi, 9);
        const auto adj = random_graph(10, 0.3, 10);
        const DenseMatrix x = random_matrix(10, 5, 11);
        Tape t;
        EncoderConfig single = small_config(kind);
        const DenseMatrix member =
            encoder_forward(t, adj, t.constant(x), s, single, "enc.m0." + to_string(kind)).value();
        CHECK(encode(adj, x, s, multi) == member);
    }
}

TEST_CASE("the default multi-encoder is the mean of its gin and gat members") {
    EncoderConfig multi = small_config(EncoderKind::multi);
    ParameterStore s;
    init_encoder(s, multi, 12);
    const auto adj = random_graph(10, 0.3, 13);
    const DenseMatrix x = random_matrix(10, 5, 14);
    Tape t;
    const DenseMatrix gin = encoder_forward(t, adj, t.constant(x), s, small_config(EncoderKind::gin), "enc.m0.gin").value();
    const DenseMatrix gat = encoder_forward(t, adj, t.constant(x), s, small_config(EncoderKind::gat), "enc.m1.gat").value();
    CHECK(max_abs_diff(encode(adj, x, s, multi), (gin + gat) * 0.5) < 1e-14);
}

TEST_CASE("encoders are permutation equivariant") {
    for (EncoderKind kind : {EncoderKind::gin, EncoderKind::gat, EncoderKind::gcn, EncoderKind::multi}) {
        for (std::uint64_t trial = 0; trial < 5; ++trial) {
            const EncoderConfig c = small_config(kind);
            ParameterStore s;
            init_encoder(s, c, 20 + trial);
            const auto adj = random_graph(10, 0.3, 30 + trial);
            const DenseMatrix x = random_matrix(10, 5, 40 + trial);
            std::vector<std::size_t> perm(10);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            Rng(50 + trial).shuffle(perm);
            const DenseMatrix h = encode(adj, x, s, c);
            const DenseMatrix hp = encode(adj.permuted(perm), permute_rows(x, perm), s, c);
            INFO(to_string(kind));
            CHECK(max_abs_diff(hp, permute_rows(h, perm)) < 1e-9);
        }
    }
}

TEST_CASE("encoder gradients match finite differences") {
    for (EncoderKind kind : {EncoderKind::gin, EncoderKind::gat, EncoderKind::gcn, EncoderKind::multi}) {
        for (bool learn_eps : {false, true}) {
            if (learn_eps && kind != EncoderKind::gin) continue;
            EncoderConfig c = small_config(kind, 4, 3);
            c.learn_gin_eps = learn_eps;
            ParameterStore s;
            init_encoder(s, c, 60);
            const auto adj = random_graph(10, 0.3, 61);
            const DenseMatrix x = random_matrix(10, 4, 62);
            const DenseMatrix r = random_matrix(3, 1, 63);
            auto loss = [&](Tape& t, const ParameterStore& p) {
                return ad::sum(ad::matmul(encoder_forward(t, adj, t.constant(x), p, c), t.constant(r)));
            };
            INFO(to_string(kind), " learn_eps=", learn_eps);
            CHECK(gad::testing::worst(gad::testing::check_gradients(gad::testing::randomized(s, 64), loss)) < 1e-4);
        }
    }
}

TEST_CASE("encoder shapes and configuration are validated") {
    ParameterStore s;
    const EncoderConfig c = small_config(EncoderKind::gin);
    init_encoder(s, c, 1);
    const auto adj = random_graph(6, 0.5, 2);
    CHECK_THROWS_AS(encode(adj, DenseMatrix(6, 4), s, c), ShapeError);
    CHECK_THROWS_AS(encode(adj, DenseMatrix(5, 5), s, c), ShapeError);

    EncoderConfig bad = small_config(EncoderKind::multi);
    bad.members = {EncoderKind::gin, EncoderKind::multi};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad.members = {EncoderKind::gin, EncoderKind::gat};
    bad.merge = MergeOp::weighted_mean;
    bad.merge_weights = {0.5, 0.6};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad.merge_weights = {0.4, 0.6};
    CHECK_NOTHROW(validate(bad));
    bad.layers = 0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    CHECK(parse_encoder_kind("gat") == EncoderKind::gat);
    CHECK_THROWS_AS(parse_encoder_kind("sage"), ConfigError);
    CHECK(parse_merge_op("max") == MergeOp::max);
}

TEST_CASE("parameter layout follows the documented names and default widths") {
    ParameterStore s;
    EncoderConfig c;
    c.kind = EncoderKind::multi;
    init_encoder(s, c, 0);
    CHECK(s.get("enc.m0.gin.l0.w1").rows() == 64);
    CHECK(s.get("enc.m0.gin.l0.w1").cols() == 128);
    CHECK(s.get("enc.m0.gin.l1.w2").cols() == 128);
    CHECK(s.get("enc.m1.gat.l1.attn").rows() == 256);
    CHECK_FALSE(s.contains("enc.m0.gin.l0.eps"));
    CHECK_FALSE(s.contains("enc.m0.gin.l2.w1"));
}
