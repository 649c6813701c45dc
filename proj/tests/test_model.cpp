#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qpragma/model.hpp"

using namespace qpragma;
using oracle::vec;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("qpragma_model_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json"))
                .string();
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

PropertyModel three_rays() {
  PropertyModel m(2);
  m.add("Ez+", orthonormalize(2, {vec({1.0, 0.0})}));
  m.add("Ez-", orthonormalize(2, {vec({0.0, 1.0})}));
  m.add("Ex+", orthonormalize(2, {vec({kInvSqrt2, kInvSqrt2})}));
  return m;
}

}  // namespace

TEST(PropertyExtension, FullZeroAndRay) {
  PropertyModel m(2);
  m.add("I", Subspace::full(2));
  m.add("O", Subspace::zero(2));
  m.add("E", orthonormalize(2, {vec({1.0, 0.0})}));
  const Extension all = property_extension(m, "I");
  ASSERT_EQ(all.size(), 1u);
  EXPECT_TRUE(all.components()[0].is_full());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(contains_state(all, StateRef::normalized(random_unit_vector(2, rng))));
  EXPECT_TRUE(property_extension(m, "O").is_empty());
  const StateRef diag(vec({kInvSqrt2, kInvSqrt2}));
  EXPECT_NEAR(m.property("E").residual(diag.vector()), kInvSqrt2, 1e-15);
  EXPECT_FALSE(contains_state(property_extension(m, "E"), diag));
  EXPECT_THROW(property_extension(m, "missing"), ModelError);
}

TEST(Classify, ThreeRays) {
  const PropertyModel m = three_rays();
  const StateClassification c = classify(m, StateRef(vec({1.0, 0.0})));
  EXPECT_EQ(c.actual, (std::set<std::string>{"Ez+"}));
  EXPECT_EQ(c.nonactual, (std::set<std::string>{"Ez-"}));
  EXPECT_EQ(c.potential, (std::set<std::string>{"Ex+"}));
}

TEST(Classify, FullAlwaysActualAndOrthogonalNonactual) {
  PropertyModel m(3);
  m.add("I", Subspace::full(3));
  m.add("P", orthonormalize(3, {vec({1.0, 0.0, 0.0}), vec({0.0, 1.0, 0.0})}));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE(classify(m, StateRef::normalized(random_unit_vector(3, rng))).actual.count("I"));
  }
  EXPECT_TRUE(classify(m, StateRef(vec({0.0, 0.0, 1.0}))).nonactual.count("P"));
}

TEST(Classify, PartitionAndProbabilityCharacterization) {
  const PropertyModel m = standard_model("qubit");
  std::mt19937_64 rng(3);
  std::vector<StateRef> states;
  for (const auto& name : m.names()) {
    if (m.property(name).dim() == 1) states.push_back(ray_of(m, name));
  }
  for (int i = 0; i < 30; ++i) states.push_back(StateRef::normalized(random_unit_vector(2, rng)));
  bool potential_seen = false;
  for (const auto& s : states) {
    const StateClassification c = classify(m, s);
    EXPECT_EQ(c.actual.size() + c.nonactual.size() + c.potential.size(), m.properties().size());
    for (const auto& name : m.names()) {
      const int hits = int(c.actual.count(name)) + int(c.nonactual.count(name)) + int(c.potential.count(name));
      EXPECT_EQ(hits, 1);
      EXPECT_EQ(c.actual.count(name) == 1, contains_state(property_extension(m, name), s));
      EXPECT_EQ(c.nonactual.count(name) == 1,
                contains_state(ext_complement(property_extension(m, name)), s));
      EXPECT_EQ(c.actual.count(name) == 1, includes(m.property(name), support(m, s)));
    }
    potential_seen = potential_seen || !c.potential.empty();
  }
  EXPECT_TRUE(potential_seen);
}

TEST(Support, IsPhaseInvariantAtom) {
  const PropertyModel m = standard_model("qubit");
  EXPECT_TRUE(equals(support(m, StateRef(vec({1.0, 0.0}))), m.property("Ez+")));
  const Scalar i(0.0, 1.0);
  const StateRef s(vec({kInvSqrt2, kInvSqrt2 * i}));
  const StateRef t(vec({kInvSqrt2 * i, -kInvSqrt2}));  // i * s
  EXPECT_EQ(support(m, s).dim(), 1);
  EXPECT_TRUE(equals(support(m, s), support(m, t)));
  EXPECT_TRUE(equals(support(m, s), m.property("Ey+")));
}

TEST(Registry, Injectivity) {
  PropertyModel m(2);
  m.add("A", orthonormalize(2, {vec({1.0, 0.0})}));
  EXPECT_THROW(m.add("B", orthonormalize(2, {vec({Scalar(0, 1), 0.0})})), ModelError);
  EXPECT_THROW(m.add("A", Subspace::full(2)), ModelError);
  EXPECT_THROW(m.add("bad name", Subspace::full(2)), ModelError);
  EXPECT_THROW(m.add("C", Subspace::full(3)), ModelError);
  EXPECT_THROW(PropertyModel(17), ModelError);
  EXPECT_NO_THROW(PropertyModel(17, Tolerance{}, 32));
}

TEST(StandardModels, Contents) {
  const PropertyModel q = standard_model("qubit");
  EXPECT_EQ(q.dim(), 2);
  EXPECT_EQ(q.properties().size(), 8u);
  EXPECT_TRUE(equals(meet(q.property("Ex+"), q.property("Ex-")), Subspace::zero(2)));
  EXPECT_TRUE(equals(complement(q.property("Ey+")), q.property("Ey-")));
  const PropertyModel t = standard_model("qutrit");
  EXPECT_EQ(t.dim(), 3);
  EXPECT_EQ(t.properties().size(), 8u);
  EXPECT_TRUE(equals(join(t.property("E1"), t.property("E2")), t.property("E12")));
  EXPECT_THROW(standard_model("ququart"), ModelError);
}

TEST(LoadModel, ParsesAndOrthonormalizes) {
  TempFile f(R"({"dim": 2, "tolerance": 1e-10,
                 "properties": {"P": [[[1,0],[1,0]]], "Q": [[[2,0],[0,0]], [[1,0],[1,0]]]}})");
  const PropertyModel m = load_model(f.path());
  EXPECT_EQ(m.dim(), 2);
  EXPECT_DOUBLE_EQ(m.tolerance().eps(), 1e-10);
  EXPECT_EQ(m.property("P").dim(), 1);
  EXPECT_TRUE(m.property("Q").is_full());
  EXPECT_TRUE(equals(m.property("P"), orthonormalize(2, {vec({kInvSqrt2, kInvSqrt2})})));
}

TEST(LoadModel, Errors) {
  EXPECT_THROW(load_model("/nonexistent/model.json"), ModelError);
  EXPECT_THROW(load_model(TempFile("{not json").path()), ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"properties": {}})").path()), ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"dim": 2, "properties": {"P": [[[1,0]]]}})").path()), ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"dim": 2, "properties": {"P": [[[0,0],[0,0]]]}})").path()),
               ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"dim": 2, "properties": {"P": [[[1,0],[0,0]],[[2,0],[0,0]]]}})").path()),
               ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"dim": 2, "properties": {"P": [[[1,0],[0,0]]], "Q": [[[0,1],[0,0]]]}})").path()),
               ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"dim": 2, "properties": {"P": [[[1,0],[0,0]]], "P": [[[0,0],[1,0]]]}})").path()),
               ModelError);
  EXPECT_THROW(load_model(TempFile(R"({"dim": 2, "tolerance": 2, "properties": {}})").path()), ModelError);
}

TEST(LoadModel, RoundTripsThroughJson) {
  const PropertyModel q = standard_model("qubit");
  TempFile f(model_to_json(q).dump());
  const PropertyModel back = load_model(f.path());
  ASSERT_EQ(back.names(), q.names());
  for (const auto& name : q.names()) EXPECT_TRUE(equals(back.property(name), q.property(name)));
}
