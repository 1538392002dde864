#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "gslrec/generative/model.hpp"
#include "gslrec/generative/serialize.hpp"
#include "gslrec/numerics/rng.hpp"
#include "oracles.hpp"

using namespace gslrec;
using namespace gslrec::generative;
using numerics::RngStream;

namespace {

GenerativeMap rnvp_map(std::size_t dim, std::size_t n_coupling, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return build_model({ModelKind::rnvp, dim, dim, n_coupling}, rng);
}

GenerativeMap zero_coupling_map(std::size_t dim, std::size_t n_coupling) {
  GenerativeMap map = rnvp_map(dim, n_coupling, 1);
  for (auto& layer : map.coupling_layers)
    for (auto* net : {&layer.scale_net, &layer.shift_net})
      for (auto& dense : *net) {
        std::fill(dense.weights.data(),
                  dense.weights.data() + dense.weights.rows() * dense.weights.cols(), 0.0);
        std::fill(dense.bias.begin(), dense.bias.end(), 0.0);
      }
  return map;
}

}  // namespace

TEST_CASE("normalize_columns basics", "[generative]") {
  CHECK(normalize_columns(numerics::Matrix::identity(4)).matrix() ==
        numerics::Matrix::identity(4));

  numerics::Matrix col(2, 1);
  col(0, 0) = 3.0;
  col(1, 0) = 4.0;
  auto b = normalize_columns(col);
  CHECK(b.matrix()(0, 0) == Catch::Approx(0.6));
  CHECK(b.matrix()(1, 0) == Catch::Approx(0.8));

  numerics::Matrix zero_col(2, 2);
  zero_col(0, 0) = 1.0;
  CHECK_THROWS_WITH(normalize_columns(zero_col),
                    Catch::Matchers::ContainsSubstring("column 1"));
}

TEST_CASE("build_model structure and determinism", "[generative]") {
  GenerativeMap map = rnvp_map(100, 4, 11);
  REQUIRE(map.coupling_layers.size() == 4);
  for (std::size_t l = 0; l < 4; ++l) {
    const auto& mask = map.coupling_layers[l].mask;
    std::size_t pass_count = 0;
    for (bool m : mask) pass_count += m;
    CHECK(pass_count == 50);
    CHECK(mask[0] == (l % 2 == 0));  // masks alternate between halves
    CHECK(mask[99] == (l % 2 == 1));
  }

  GenerativeMap again = rnvp_map(100, 4, 11);
  CHECK(map.coupling_layers[2].scale_net[0].weights ==
        again.coupling_layers[2].scale_net[0].weights);

  RngStream rng(3, 0);
  CHECK_THROWS_AS(build_model({ModelKind::rnvp, 7, 7, 4}, rng), std::invalid_argument);
}

TEST_CASE("gauss_cdf map maps zero to one-half", "[generative]") {
  RngStream rng(1, 0);
  GenerativeMap map = build_model({ModelKind::gauss_cdf, 5, 5}, rng);
  Vector x = evaluate(map, Vector(5, 0.0));
  for (double xi : x) CHECK(xi == Catch::Approx(0.5));
}

TEST_CASE("forward identity and degenerate cases", "[generative]") {
  RngStream rng(2, 0);
  GenerativeMap id = build_model({ModelKind::identity, 6, 6}, rng);
  MixingMatrix eye = MixingMatrix::identity(6);
  Vector z{1, -2, 3, -4, 5, -6};
  CHECK(forward(id, eye, z) == z);

  // A coupling stack with all-zero nets is the identity map.
  GenerativeMap zero = zero_coupling_map(6, 3);
  CHECK(evaluate(zero, z) == z);

  // One-layer sigmoid with zero parameters maps everything to 0.5.
  GenerativeMap sig = build_model({ModelKind::one_layer, 6, 6, 0, Activation::sigmoid}, rng);
  std::fill(sig.dense_layers[0].weights.data(), sig.dense_layers[0].weights.data() + 36, 0.0);
  Vector x = forward(sig, eye, z);
  for (double xi : x) CHECK(xi == Catch::Approx(0.5));
}

TEST_CASE("vjp adjoint of linear map and zero cotangent", "[generative]") {
  RngStream rng(5, 0);
  numerics::Matrix raw = numerics::gaussian_matrix(4, 6, 1.0, rng);
  MixingMatrix b = normalize_columns(raw);
  GenerativeMap id = build_model({ModelKind::identity, 6, 4}, rng);
  Vector z = numerics::gaussian_vector(6, 1.0, rng);
  Vector u = numerics::gaussian_vector(4, 1.0, rng);

  Vector g = vjp(id, b, z, u);
  Vector ref = numerics::matvec_transpose(b.matrix(), u);
  CHECK(oracles::relative_l2_error(g, ref) < 1e-14);

  Vector zero = vjp(id, b, z, Vector(4, 0.0));
  for (double gi : zero) CHECK(gi == 0.0);
}

TEST_CASE("vjp matches finite differences for every model kind", "[generative]") {
  const std::size_t dim = 10;
  std::vector<GenerativeMap> maps;
  RngStream rng(17, 0);
  maps.push_back(build_model({ModelKind::identity, dim, dim}, rng));
  maps.push_back(build_model({ModelKind::one_layer, dim, dim, 0, Activation::sigmoid}, rng));
  maps.push_back(build_model({ModelKind::one_layer, dim, dim, 0, Activation::exp}, rng));
  maps.push_back(build_model({ModelKind::rnvp, dim, dim, 4}, rng));
  maps.push_back(build_model({ModelKind::gauss_cdf, dim, dim}, rng));

  MixingMatrix b = normalize_columns(numerics::gaussian_matrix(dim, dim, 1.0, rng));
  for (const auto& map : maps) {
    Vector z(dim), u(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      z[i] = (0.15 + 0.5 * rng.next_uniform()) * (rng.next_uniform() > 0.5 ? 1.0 : -1.0);
      u[i] = rng.next_normal();
    }
    auto scalar = [&](const Vector& zz) { return numerics::dot(u, forward(map, b, zz)); };
    Vector fd = oracles::finite_difference_gradient(scalar, z, 1e-4);
    Vector g = vjp(map, b, z, u);
    INFO("kind: " << model_kind_name(map.kind));
    CHECK(oracles::relative_l2_error(g, fd) < 1e-5);
  }
}

TEST_CASE("vjp is linear in the cotangent", "[generative]") {
  const std::size_t dim = 8;
  GenerativeMap map = rnvp_map(dim, 4, 23);
  RngStream rng(29, 0);
  MixingMatrix b = normalize_columns(numerics::gaussian_matrix(dim, dim, 1.0, rng));
  Vector z = numerics::gaussian_vector(dim, 1.0, rng);
  Vector u1 = numerics::gaussian_vector(dim, 1.0, rng);
  Vector u2 = numerics::gaussian_vector(dim, 1.0, rng);
  const double a = 1.7, c = -0.3;

  Vector combo(dim);
  for (std::size_t i = 0; i < dim; ++i) combo[i] = a * u1[i] + c * u2[i];
  Vector lhs = vjp(map, b, z, combo);
  Vector g1 = vjp(map, b, z, u1);
  Vector g2 = vjp(map, b, z, u2);
  Vector rhs(dim);
  for (std::size_t i = 0; i < dim; ++i) rhs[i] = a * g1[i] + c * g2[i];
  CHECK(oracles::relative_l2_error(lhs, rhs) < 1e-10);
}

TEST_CASE("inverse of gauss_cdf and zero-parameter coupling stacks", "[generative]") {
  RngStream rng(31, 0);
  GenerativeMap gc = build_model({ModelKind::gauss_cdf, 4, 4}, rng);
  Vector half(4, 0.5);
  Vector z = inverse(gc, half);
  for (double zi : z) CHECK(std::fabs(zi) < 1e-14);
  CHECK_THROWS_AS(inverse(gc, Vector{0.5, 1.5, 0.5, 0.5}), std::invalid_argument);

  GenerativeMap zero = zero_coupling_map(6, 4);
  Vector x{0.3, -1.2, 0.7, 2.0, -0.1, 0.4};
  CHECK(inverse(zero, x) == x);

  GenerativeMap id = build_model({ModelKind::identity, 4, 4}, rng);
  CHECK_THROWS_AS(inverse(id, half), std::invalid_argument);
}

TEST_CASE("single coupling layer inverts exactly at any input scale", "[generative]") {
  RngStream rng(91, 0);
  for (std::size_t dim : {12u, 100u}) {
    GenerativeMap map = rnvp_map(dim, 1, 300 + dim);
    const auto& layer = map.coupling_layers.front();
    for (double std_in : {0.3, 1.0, 50.0}) {
      for (int trial = 0; trial < 50; ++trial) {
        Vector v = numerics::gaussian_vector(dim, std_in, rng);
        Vector back = coupling_inverse(layer, coupling_forward(layer, v));
        REQUIRE(oracles::relative_l2_error(back, v) < 1e-10);
      }
    }
  }
}

TEST_CASE("shallow rnvp round-trip on unit-scale vectors", "[generative]") {
  GenerativeMap map = rnvp_map(12, 2, 102);
  RngStream rng(57, 2);
  for (int trial = 0; trial < 100; ++trial) {
    Vector v = numerics::gaussian_vector(12, 1.0, rng);
    Vector back = inverse(map, evaluate(map, v));
    REQUIRE(oracles::relative_l2_error(back, v) < 1e-8);
  }
}

// Deep stacks amplify coordinates by up to exp(10) per layer, so a round trip
// through a badly scaled region cannot beat the dynamic range it traverses.
// The inverse is still exact wherever the forward trace stays moderate, which
// this test checks by shrinking each input until the trace peak is below 1e3.
TEST_CASE("deep rnvp round-trip where the forward trace stays moderate", "[generative]") {
  for (std::size_t n_c : {4u, 8u}) {
    GenerativeMap map = rnvp_map(12, n_c, 100 + n_c);
    RngStream rng(57, n_c);
    for (int trial = 0; trial < 100; ++trial) {
      Vector v = numerics::gaussian_vector(12, 1.0, rng);
      double peak = 0.0;
      for (int halvings = 0; halvings < 40; ++halvings) {
        peak = 0.0;
        Vector cur = v;
        for (const auto& layer : map.coupling_layers) {
          cur = coupling_forward(layer, cur);
          for (double c : cur) peak = std::max(peak, std::fabs(c));
        }
        if (peak <= 1e3) break;
        for (double& c : v) c *= 0.5;
      }
      REQUIRE(peak <= 1e3);
      Vector back = inverse(map, evaluate(map, v));
      REQUIRE(oracles::relative_l2_error(back, v) < 1e-8);
    }
  }
}

TEST_CASE("gauss_cdf round-trip", "[generative]") {
  RngStream rng(41, 0);
  GenerativeMap gc = build_model({ModelKind::gauss_cdf, 16, 16}, rng);
  Vector v = numerics::gaussian_vector(16, 1.0, rng);
  Vector back = inverse(gc, evaluate(gc, v));
  CHECK(oracles::relative_l2_error(back, v) < 1e-10);
}

TEST_CASE("normal quantile inverts normal cdf", "[generative]") {
  for (double x : {-5.0, -2.2, -0.5, 0.0, 0.3, 1.7, 4.9}) {
    CHECK(normal_quantile(normal_cdf(x)) == Catch::Approx(x).margin(1e-11));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("model serialization round-trips losslessly", "[generative]") {
  GenerativeMap map = rnvp_map(8, 3, 77);
  const auto path = std::filesystem::temp_directory_path() / "gslrec_model_roundtrip.json";
  save_model(map, path.string());
  GenerativeMap loaded = load_model(path.string());
  std::filesystem::remove(path);

  CHECK(loaded.kind == map.kind);
  CHECK(loaded.latent_dim == map.latent_dim);
  CHECK(loaded.build_seed == map.build_seed);
  REQUIRE(loaded.coupling_layers.size() == map.coupling_layers.size());
  for (std::size_t l = 0; l < map.coupling_layers.size(); ++l) {
    CHECK(loaded.coupling_layers[l].mask == map.coupling_layers[l].mask);
    // bitwise equality of parameters
    CHECK(loaded.coupling_layers[l].scale_net[0].weights ==
          map.coupling_layers[l].scale_net[0].weights);
    CHECK(loaded.coupling_layers[l].shift_net[1].weights ==
          map.coupling_layers[l].shift_net[1].weights);
  }

  RngStream rng(9, 9);
  Vector v = numerics::gaussian_vector(8, 1.0, rng);
  CHECK(evaluate(loaded, v) == evaluate(map, v));
}
