#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "spdgeo/io.hpp"

using namespace spdgeo;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("spdgeo_io_" + name)).string();
}

bool bit_equal(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a.data()[i], &b.data()[i], sizeof(Complex)) != 0) return false;
  }
  return true;
}

}  // namespace

TEST(MatrixJson, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SpdMatrix a = random_spd(4, seed, 6.0);
    EXPECT_TRUE(bit_equal(matrix_from_json(matrix_to_json(a.matrix())), a.matrix()));
    const HermitianMatrix h = random_hermitian(3, seed, seed % 2 == 0);
    EXPECT_TRUE(bit_equal(matrix_from_json(matrix_to_json(h)), h.matrix()));
  }
  CMatrix awkward(1, 1);
  awkward(0, 0) = Complex(0.1 + 0.2, -5e-324);
  EXPECT_TRUE(bit_equal(matrix_from_json(matrix_to_json(awkward)), awkward));
}

TEST(MatrixJson, Layout) {
  const CMatrix real = SpdMatrix::identity(2).matrix();
  const auto j = nlohmann::json::parse(matrix_to_json(real));
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["complex"], false);
  ASSERT_EQ(j["data"].size(), 4u);
  EXPECT_EQ(j["data"][0][0], 1.0);
  EXPECT_EQ(j["data"][1][1], 0.0);

  CMatrix c(2, 2);
  c << Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0);
  const auto jc = nlohmann::json::parse(matrix_to_json(c));
  EXPECT_EQ(jc["complex"], true);
  EXPECT_EQ(jc["data"][1][1], 1.0);
  EXPECT_EQ(jc["data"][2][1], -1.0);
}

TEST(MatrixJson, AcceptsPlainNumbersForRealMatrices) {
  const CMatrix m = matrix_from_json(std::string(R"({"n":2,"complex":false,"data":[2,1,1,3]})"));
  EXPECT_EQ(m(0, 1), Complex(1, 0));
  EXPECT_EQ(m(1, 1), Complex(3, 0));
}

TEST(MatrixJson, ParseErrors) {
  for (const char* bad : {"not json", R"({"data":[1]})", R"({"n":0,"data":[]})", R"({"n":2,"data":[1,2,3]})",
                          R"({"n":1.5,"data":[1]})", R"({"n":1,"data":["x"]})", R"({"n":1,"data":[[1,2,3]]})",
                          R"({"n":1,"complex":false,"data":[[1,0.5]]})", R"([1,2])"}) {
    EXPECT_THROW(matrix_from_json(std::string(bad)), ParseError) << bad;
  }
}

TEST(MatrixFiles, ReadWrite) {
  const std::string path = temp_path("one.json");
  const SpdMatrix a = random_spd(3, 5);
  write_text_file(path, matrix_to_json(a.matrix()));
  EXPECT_TRUE(bit_equal(read_spd(path).matrix(), a.matrix()));
  EXPECT_TRUE(bit_equal(read_hermitian(path).matrix(), a.matrix()));

  const std::string list = temp_path("list.json");
  write_text_file(list, "[" + matrix_to_json(a.matrix()) + "," + matrix_to_json(SpdMatrix::identity(3).matrix()) + "]");
  const auto all = read_matrices(list);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[1], CMatrix::Identity(3, 3).cast<Complex>());
  EXPECT_THROW(read_spd(list), ParseError);

  const std::string indefinite = temp_path("indef.json");
  write_text_file(indefinite, R"({"n":2,"complex":false,"data":[1,2,2,1]})");
  EXPECT_THROW(read_spd(indefinite), DomainError);
  const std::string nonherm = temp_path("nonherm.json");
  write_text_file(nonherm, R"({"n":2,"complex":false,"data":[1,2,0,1]})");
  EXPECT_THROW(read_hermitian(nonherm), DomainError);

  const std::string empty = temp_path("empty.json");
  write_text_file(empty, "[]");
  EXPECT_THROW(read_matrices(empty), ParseError);
  EXPECT_THROW(read_matrices(temp_path("missing.json")), ParseError);
  EXPECT_THROW(write_text_file("/nonexistent/dir/x.json", "{}"), ParseError);

  for (const auto& p : {path, list, indefinite, nonherm, empty}) std::remove(p.c_str());
}
