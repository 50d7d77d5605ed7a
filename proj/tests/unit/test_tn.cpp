#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "dense_mps.hpp"
#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/tn/frontend.hpp"
#include "tnmpcqep/tn/linalg.hpp"
#include "tnmpcqep/tn/patches.hpp"

using namespace tnmpcqep;
using namespace tnmpcqep::tn;

namespace {

RVector random_image(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVector x(kImagePixels);
  for (auto& v : x) v = u(rng);
  return x;
}

FrontendConfig config(FrontendKind kind, std::uint64_t seed = 3) {
  FrontendConfig c;
  c.kind = kind;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("qr_isometry") {
  std::mt19937_64 rng(1);
  const CMatrix q = qr_isometry(CMatrix::Identity(4, 4));
  CHECK((q - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);

  const CMatrix m = random_complex(8, 4, rng);
  const CMatrix r = qr_isometry(m);
  CHECK(isometry_defect(r) <= 1e-10);
  // Same column span: projecting M onto span(Q) leaves it unchanged.
  CHECK((r * (r.adjoint() * m) - m).cwiseAbs().maxCoeff() <= 1e-10);

  CMatrix dup = random_complex(8, 4, rng);
  dup.col(3) = dup.col(1);
  CHECK(isometry_defect(qr_isometry(dup)) <= 1e-10);
  CHECK_THROWS_AS(qr_isometry(CMatrix::Zero(2, 3)), UsageError);
}

TEST_CASE("patchify") {
  RMatrix img(28, 28);
  for (int i = 0; i < 28; ++i)
    for (int j = 0; j < 28; ++j) img(i, j) = i * 28 + j;
  const auto p = patchify(img);
  REQUIRE(p.size() == 16);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) CHECK(p[0](a * 7 + b) == a * 28 + b);
  // Patch 5 is block row 1, block column 1.
  CHECK(p[5](0) == 7 * 28 + 7);
  CHECK(unpatchify(p) == img);

  const auto c = patchify(RMatrix::Constant(28, 28, 0.3));
  for (const auto& v : c) CHECK(v == RVector::Constant(49, 0.3));
  CHECK_THROWS_AS(patchify(RMatrix::Zero(27, 28)), UsageError);
  CHECK(flatten(to_image(flatten(img))) == flatten(img));
}

TEST_CASE("realify") {
  CVector psi(2);
  psi << Complex(1, 0), Complex(0, 1);
  const RVector r = realify(psi);
  CHECK(r == (RVector(4) << 1, 0, 0, 1).finished());
  CVector real(3);
  real << 1.0, -2.0, 0.5;
  CHECK(realify(real).tail(3).isZero());
  std::mt19937_64 rng(2);
  const CVector v = random_complex(9, 1, rng).col(0);
  CHECK(std::abs(realify(v).norm() - v.norm()) <= 1e-12);
}

TEST_CASE("frontend isometries after construction") {
  for (auto kind : {FrontendKind::MPS, FrontendKind::TTN, FrontendKind::MERA}) {
    const Frontend f(config(kind));
    CHECK(f.max_isometry_defect() <= 1e-8);
    if (kind == FrontendKind::MERA)
      for (const auto& u : f.tree().disentanglers) CHECK(unitarity_defect(u) <= 1e-8);
  }
}

TEST_CASE("mps tiny instance against nested sums") {
  FrontendConfig c = config(FrontendKind::MPS, 5);
  c.sites = 3;
  c.d_phys = 2;
  c.bond = 2;
  c.h = 6;
  c.d = 4;
  const Frontend f(c);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const RVector x = random_image(rng);
    const auto sites = mps_site_vectors(x, f.mps(), c);
    const CVector oracle = oracle::dense_mps3(sites, f.mps().cores, 2, 2);
    const CVector got = f.state(x);
    CHECK((got - oracle).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("mps properties") {
  const Frontend f(config(FrontendKind::MPS));
  const RVector zero = RVector::Zero(kImagePixels);
  const RVector z = f.encode(zero);
  CHECK(z.size() == 64);
  CHECK(z.allFinite());
  CHECK(std::abs(f.state(zero).norm() - 1.0) <= 1e-10);
  std::mt19937_64 rng(7);
  const RVector x = random_image(rng);
  CHECK(f.encode(x) == Frontend(config(FrontendKind::MPS)).encode(x));
  RVector bad = x;
  bad(3) = NAN;
  CHECK_THROWS_AS(f.encode(bad), NumericError);
}

TEST_CASE("ttn properties") {
  const Frontend f(config(FrontendKind::TTN));
  std::mt19937_64 rng(8);
  const RVector x = random_image(rng);
  CHECK(std::abs(f.state(x).norm() - 1.0) <= 1e-10);
  CHECK(f.encode(x).size() == 64);

  auto leaves = tree_leaves(x, f.tree());
  const CVector base = ttn_contract(leaves, f.tree());
  auto sibling = leaves;
  std::swap(sibling[0], sibling[1]);
  CHECK((ttn_contract(sibling, f.tree()) - base).norm() > 1e-6);
  auto distant = leaves;
  std::swap(distant[0], distant[15]);
  CHECK((ttn_contract(distant, f.tree()) - base).norm() > 1e-6);

  // Identical patches give identical level-1 parents.
  RVector same(kImagePixels);
  const auto one = patchify_flat(x)[0];
  std::vector<RVector> patches(16, one);
  same = flatten(unpatchify(patches));
  const auto parents = coarse_grain(tree_leaves(same, f.tree()), f.tree().isometries[0]);
  for (const auto& p : parents) CHECK((p - parents[0]).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& p : parents) CHECK(std::abs(p.norm() - 1.0) <= 1e-10);
}

TEST_CASE("mera properties") {
  const Frontend mera(config(FrontendKind::MERA));
  std::mt19937_64 rng(9);
  auto leaves = tree_leaves(random_image(rng), mera.tree());
  double before = 0, after = 0;
  for (const auto& l : leaves) before += l.squaredNorm();
  disentangle(leaves, mera.tree().disentanglers[0]);
  for (const auto& l : leaves) after += l.squaredNorm();
  CHECK(std::abs(before - after) <= 1e-10);
  CHECK(std::abs(mera.state(random_image(rng)).norm() - 1.0) <= 1e-10);
}

TEST_CASE("mera with identity disentanglers equals ttn on 100 inputs") {
  const Frontend ttn(config(FrontendKind::TTN, 11));
  Frontend mera(config(FrontendKind::MERA, 11));
  mera.set_identity_disentanglers();
  std::mt19937_64 rng(10);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const RVector x = random_image(rng);
    worst = std::max(worst, (ttn.encode(x) - mera.encode(x)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("batch encoding matches single encodes for both backends") {
  std::mt19937_64 rng(12);
  RMatrix batch(7, kImagePixels);
  for (int i = 0; i < 7; ++i) batch.row(i) = random_image(rng).transpose();
  for (auto kind : {FrontendKind::MPS, FrontendKind::TTN, FrontendKind::MERA}) {
    const Frontend f(config(kind));
    const RMatrix a = f.encode_batch(batch, Backend::Serial);
    const RMatrix b = f.encode_batch(batch, Backend::OpenMP);
    CHECK(a == b);
    for (int i = 0; i < 7; ++i) CHECK(a.row(i).transpose() == f.encode(batch.row(i).transpose()));
  }
}

TEST_CASE("parameter bundles round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "tnmpcqep_test_tn";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(13);
  const RVector x = random_image(rng);
  for (auto kind : {FrontendKind::MPS, FrontendKind::TTN, FrontendKind::MERA}) {
    const Frontend f(config(kind));
    const auto path = dir / (to_string(kind) + ".tnb");
    f.save(path);
    const Frontend g = Frontend::load(path);
    CHECK(g.kind() == kind);
    CHECK(g.encode(x) == f.encode(x));
  }
  {
    std::ofstream junk(dir / "junk.tnb", std::ios::binary);
    junk << "not a bundle";
  }
  CHECK_THROWS_AS(Frontend::load(dir / "junk.tnb"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config validation") {
  FrontendConfig c;
  c.d_loc = 12;
  CHECK_THROWS_AS(Frontend{c}, UsageError);
  c = {};
  c.kind = FrontendKind::MPS;
  c.h = 250;
  CHECK_THROWS_AS(Frontend{c}, UsageError);
  CHECK(parse_frontend_kind("TTN") == FrontendKind::TTN);
  CHECK_THROWS_AS(parse_frontend_kind("peps"), UsageError);
}
