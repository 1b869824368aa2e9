#include <gtest/gtest.h>

#include "qlab/io.hpp"
#include "test_support.hpp"

namespace qlab {
namespace {

TEST(MatrixJson, RoundTripIsLosslessForRandomDensities) {
  SplitMix64 rng(151);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho(testing::random_density(1 + trial % 4, rng));
    const auto text = io::to_json(rho).dump();
    const auto back = io::density_from_json(io::json::parse(text));
    EXPECT_EQ(back, rho);
  }
}

TEST(MatrixJson, Schema) {
  const auto j = io::to_json(BasisChange::hadamard());
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["re"].size(), 2u);
  EXPECT_EQ(j["im"][1][1], 0.0);
  EXPECT_EQ(io::to_json(cat_density())["label"], "A");
}

TEST(MatrixJson, ImaginaryPartIsOptional) {
  const auto rho = io::density_from_json(io::json::parse(R"({"dim": 2, "re": [[1, 0], [0, 0]]})"));
  EXPECT_EQ(rho.matrix(), ComplexMatrix::diagonal({1.0, 0.0}));
}

TEST(MatrixJson, ReaderRevalidates) {
  using io::json;
  // trace 2
  EXPECT_THROW(io::density_from_json(json::parse(R"({"dim": 2, "re": [[1, 0], [0, 1]]})")),
               PreconditionError);
  // not Hermitian
  EXPECT_THROW(io::density_from_json(
                   json::parse(R"({"dim": 2, "re": [[0.5, 0], [0, 0.5]], "im": [[0, 0.1], [0.1, 0]]})")),
               PreconditionError);
  // negative eigenvalue, repairable on request
  const auto negative = json::parse(R"({"dim": 2, "re": [[1.2, 0], [0, -0.2]]})");
  EXPECT_THROW(io::density_from_json(negative), PreconditionError);
  EXPECT_NO_THROW(io::density_from_json(negative, true));
  // shape and schema errors
  EXPECT_THROW(io::density_from_json(json::parse(R"({"dim": 2, "re": [[1, 0]]})")), DimensionError);
  EXPECT_THROW(io::density_from_json(json::parse(R"({"dim": 1, "re": [[1]], "extra": 0})")),
               PreconditionError);
  EXPECT_THROW(io::density_from_json(json::parse(R"({"dim": 1, "re": [["x"]]})")), PreconditionError);
  EXPECT_THROW(io::basis_from_json(json::parse(R"({"dim": 2, "re": [[1, 1], [0, 1]]})")),
               PreconditionError);
}

TEST(Format17, RoundTrips) {
  SplitMix64 rng(157);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = std::ldexp(rng.uniform_pm1(), static_cast<int>(rng.next() % 200) - 100);
    EXPECT_EQ(std::stod(io::format17(x)), x);
  }
  EXPECT_EQ(io::format17(0.1), "0.10000000000000001");
}

}  // namespace
}  // namespace qlab
