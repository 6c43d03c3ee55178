#include <sstream>

#include <gtest/gtest.h>

#include "viscowave/io.hpp"

using namespace viscowave;

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hash_hex(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
}

TEST(Json, MeasureRoundtrip) {
  SpectralMeasure m{{{1.0, 2.0}}, TabulatedDensity{{1.0, 2.0}, {0.5, 0.25}, -1.5}};
  const auto j = to_json(m);
  EXPECT_EQ(j["atoms"][0]["r"], 1.0);
  EXPECT_EQ(j["density"]["type"], "table");
  const auto back = measure_from_json(j);
  EXPECT_EQ(back.atoms.size(), 1u);
  const auto& t = std::get<TabulatedDensity>(*back.density);
  EXPECT_EQ(t.xi, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(*t.tail_exponent, -1.5);
  const auto p = measure_from_json(json::parse(R"({"atoms":[],"density":{"type":"power","a":1,"alpha":0.5}})"));
  EXPECT_TRUE(std::holds_alternative<PowerLawDensity>(*p.density));
  EXPECT_TRUE(measure_from_json(json::parse(R"({"atoms":[],"density":null})")).empty());
}

TEST(Json, LawsAndModels) {
  for (const AttenuationLaw& law :
       {AttenuationLaw{PowerLaw{2.0, 0.3}}, AttenuationLaw{LogPower{1.5}},
        AttenuationLaw{ColeType{1.0, 2.0, 0.5}}, AttenuationLaw{TwoExponent{1.0, 2.0, 0.8, 0.4}},
        AttenuationLaw{MeasureBacked{SpectralMeasure{{{1.0, 1.0}}, std::nullopt}}}}) {
    const auto j = to_json(law);
    EXPECT_EQ(to_json(law_from_json(j)), j);
  }
  const MaterialModel m{2.0, 3.0, PowerLaw{1.0, 0.5}, SpectralMeasure{{{1.0, 1.0}}, std::nullopt}, 0.5};
  const auto j = to_json(m);
  EXPECT_EQ(to_json(model_from_json(j)), j);
  EXPECT_THROW(model_from_json(json::parse(R"({"rho":1})")), InvalidArgument);
  EXPECT_THROW(law_from_json(json::parse(R"({"type":"nope"})")), InvalidArgument);
  EXPECT_THROW(law_from_json(json::parse(R"({"type":"power","a":1,"alpha":5})")), InvalidArgument);
}

TEST(Json, VerdictSchema) {
  CausalityVerdict v;
  v.classification = SpeedClass::finite;
  v.pw.value = 1.5;
  v.pw.tail = {2.0, 0.5, 0.0};
  v.notes = {"x"};
  const auto j = to_json(v);
  EXPECT_EQ(j["class"], "finite");
  EXPECT_EQ(j["pw_value"], 1.5);
  EXPECT_EQ(j["tail"]["s"], 0.5);
  EXPECT_EQ(j["notes"][0], "x");
}

TEST(Json, SpectrumRoundtrip) {
  RationalSpectrum s;
  s.side = SpectrumSide::relaxation;
  s.atoms = {{2.0, 0.5}};
  s.mu0 = 0.25;
  const auto j = to_json(s, {"note"});
  EXPECT_EQ(j["side"], "relaxation");
  EXPECT_EQ(j["diagnostics"]["messages"][0], "note");
  const auto b = spectrum_from_json(j);
  EXPECT_EQ(b.side, SpectrumSide::relaxation);
  EXPECT_EQ(b.mu0, 0.25);
}

TEST(Csv, ReadSkipsCommentsAndValidates) {
  std::istringstream in("# viscowave 0.1.0 config=abc\nomega,attenuation,weight\n1,0.5,1\n2, 0.7 ,2\n");
  const auto t = read_csv(in);
  EXPECT_EQ(t.comments.size(), 1u);
  EXPECT_EQ(t.rows.size(), 2u);
  const auto s = samples_from_csv(t);
  EXPECT_EQ(s.weight, (std::vector<double>{1.0, 2.0}));
  std::istringstream bad("omega,attenuation\n1,x\n");
  EXPECT_THROW(read_csv(bad), InvalidArgument);
  std::istringstream ragged("omega,attenuation\n1\n");
  EXPECT_THROW(read_csv(ragged), InvalidArgument);
  std::istringstream empty("");
  EXPECT_THROW(samples_from_csv(read_csv(empty)), InvalidArgument);
}

TEST(Csv, WriteFullPrecision) {
  std::ostringstream out;
  write_csv(out, metadata_line("0123"), {"a", "b"}, {{0.1, 1.0 / 3.0}});
  EXPECT_EQ(out.str(), "# viscowave " + std::string(kVersion) +
                           " config=0123\na,b\n0.10000000000000001,0.33333333333333331\n");
  std::istringstream in(out.str());
  const auto t = read_csv(in);
  EXPECT_EQ(t.rows[0][1], 1.0 / 3.0);
}

TEST(ConfigHash, CanonicalOrder) {
  const auto a = json::parse(R"({"b":1,"a":2})");
  const auto b = json::parse(R"({"a":2,"b":1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(json::parse(R"({"a":2,"b":2})")));
}
