#include "wiresecret/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <random>

namespace ws = wiresecret;

TEST(Io, ParsesDmcChannel) {
  const auto j = ws::parse_json_text(R"({
    "type": "dmc",
    "transitions": [[[0.9, 0.1], [0.2, 0.8]], [[1.0, 0.0], [0.0, 1.0]]]
  })", "channel");
  const ws::ChannelSpec spec = ws::parse_channel(j);
  ASSERT_EQ(spec.kind, ws::ChannelSpec::Kind::dmc);
  ASSERT_EQ(spec.receiver_count(), 2);
  EXPECT_DOUBLE_EQ(spec.dmc.transitions[0](0, 1), 0.1);
  EXPECT_DOUBLE_EQ(spec.dmc.transitions[1](1, 1), 1.0);
}

TEST(Io, ParsesSisoAndMimoChannels) {
  const ws::ChannelSpec siso = ws::parse_channel(ws::parse_json_text(
      R"({"type": "siso", "noise_variances": [2.0, 1.0], "power": 3.5})", "channel"));
  ASSERT_EQ(siso.kind, ws::ChannelSpec::Kind::siso);
  EXPECT_DOUBLE_EQ(siso.siso.power, 3.5);
  EXPECT_EQ(siso.receiver_count(), 2);

  const ws::ChannelSpec mimo = ws::parse_channel(ws::parse_json_text(R"({
    "type": "mimo",
    "noise_covariances": [[[2.0, 0.0], [0.0, 2.0]], [[1.0, 0.0], [0.0, 1.0]]],
    "input_cap": [[2.0, 0.0], [0.0, 2.0]]
  })", "channel"));
  ASSERT_EQ(mimo.kind, ws::ChannelSpec::Kind::mimo);
  EXPECT_EQ(mimo.receiver_count(), 2);
  EXPECT_DOUBLE_EQ(mimo.mimo.input_cap(1, 1), 2.0);
}

TEST(Io, RejectsMalformedChannels) {
  EXPECT_THROW(ws::parse_json_text("{not json", "channel"), ws::ValidationError);
  EXPECT_THROW(ws::parse_channel(ws::parse_json_text(R"({"type": "tube"})", "c")), ws::ValidationError);
  EXPECT_THROW(ws::parse_channel(ws::parse_json_text(R"({"transitions": []})", "c")), ws::ValidationError);
  // Ragged matrix.
  EXPECT_THROW(ws::parse_channel(ws::parse_json_text(
      R"({"type": "dmc", "transitions": [[[0.5, 0.5], [1.0]]]})", "c")), ws::ValidationError);
  // Rows that do not sum to one are caught by channel validation.
  EXPECT_THROW(ws::parse_channel(ws::parse_json_text(
      R"({"type": "dmc", "transitions": [[[0.5, 0.2], [0.5, 0.5]]]})", "c")), ws::ValidationError);
  // Non-numeric entry.
  EXPECT_THROW(ws::parse_channel(ws::parse_json_text(
      R"({"type": "siso", "noise_variances": ["x"], "power": 1})", "c")), ws::ValidationError);
}

TEST(Io, ParsesStructureWithExplicitAndComplementForbidden) {
  const ws::AccessStructure explicit_s = ws::parse_structure(ws::parse_json_text(R"({
    "participants": 3,
    "qualified": [[1, 2], [1, 3], [2, 3]],
    "forbidden": [[1], [2], [3]]
  })", "structure"));
  EXPECT_EQ(explicit_s.participants, 3);
  ASSERT_EQ(explicit_s.qualified.size(), 3u);
  EXPECT_EQ(explicit_s.qualified[0], 0b011u);
  ASSERT_EQ(explicit_s.forbidden.size(), 3u);

  const ws::AccessStructure comp = ws::parse_structure(ws::parse_json_text(R"({
    "participants": 3,
    "qualified": [[1, 2], [1, 3], [2, 3]],
    "forbidden": "complement"
  })", "structure"));
  // Complement of a 2-of-3 threshold: the singletons.
  std::vector<ws::SubsetMask> expect{0b001, 0b010, 0b100};
  EXPECT_EQ(comp.forbidden, expect);

  EXPECT_THROW(ws::parse_structure(ws::parse_json_text(R"({
    "participants": 2, "qualified": [[1, 2, 3]], "forbidden": []
  })", "s")), ws::ValidationError);
  EXPECT_THROW(ws::parse_structure(ws::parse_json_text(R"({
    "participants": 2, "qualified": [[]], "forbidden": []
  })", "s")), ws::ValidationError);
}

TEST(Io, ParsesMisoInstanceWithDefaultBoosts) {
  const ws::MisoSharingInstance inst = ws::parse_miso_instance(ws::parse_json_text(R"({
    "channel": [[1.0, 0.0], [0.0, 1.0]],
    "noise": [[1.0, 0.0], [0.0, 1.0]],
    "input_cap": [[2.0, 0.0], [0.0, 2.0]]
  })", "instance"));
  EXPECT_TRUE(inst.boost_variances.empty());
  EXPECT_EQ(inst.receiver_count(), 2);

  const ws::MisoSharingInstance boosted = ws::parse_miso_instance(ws::parse_json_text(R"({
    "channel": [[1.0, 0.0], [0.0, 1.0]],
    "noise": [[1.0, 0.0], [0.0, 1.0]],
    "input_cap": [[2.0, 0.0], [0.0, 2.0]],
    "boost_variances": [1.5]
  })", "instance"));
  ASSERT_EQ(boosted.boost_variances.size(), 1u);
  EXPECT_DOUBLE_EQ(boosted.boost_variances[0], 1.5);

  EXPECT_THROW(ws::parse_miso_instance(ws::parse_json_text(R"({
    "channel": [[1.0, 0.0], [0.0, 1.0]],
    "noise": [[1.0, 0.0], [0.0, 1.0]]
  })", "instance")), ws::ValidationError);
}

TEST(Io, ParsesCovarianceChainAndSimConfig) {
  const ws::CovarianceChain chain = ws::parse_covariance_chain(ws::parse_json_text(R"({
    "cap": [[2.0, 0.0], [0.0, 2.0]],
    "layers": [[[1.0, 0.0], [0.0, 1.0]]]
  })", "chain"));
  ASSERT_EQ(chain.layers.size(), 1u);
  EXPECT_DOUBLE_EQ(chain.cap(0, 0), 2.0);

  const ws::BinningConfig cfg = ws::parse_sim_config(ws::parse_json_text(R"({
    "chain": {"first": [1.0], "factors": [[[0.5, 0.5]]]},
    "channel": {"type": "dmc", "transitions": [[[0.7, 0.3], [0.3, 0.7]], [[1.0, 0.0], [0.0, 1.0]]]},
    "message_rates": [0.0, 0.5],
    "codebook_rates": [0.0, 1.0],
    "block_length": 2,
    "seed": 5
  })", "config"));
  EXPECT_EQ(cfg.block_length, 2);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.chain.level_count(), 2);
  // The parsed config must be usable directly.
  ws::LayeredCodebook cb(cfg);
  EXPECT_EQ(cb.rows(2), 4u);

  EXPECT_THROW(ws::parse_sim_config(ws::parse_json_text(R"({
    "chain": {"first": [1.0]},
    "channel": {"type": "siso", "noise_variances": [1.0], "power": 1.0},
    "message_rates": [0.5],
    "codebook_rates": [0.5]
  })", "config")), ws::ValidationError);
}

TEST(Io, Fnv1aMatchesReferenceVectors) {
  EXPECT_EQ(ws::fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(ws::fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(ws::fnv1a64("foobar"), 0x85944171f73967e8ull);
  EXPECT_EQ(ws::format_hash(0xcbf29ce484222325ull), "cbf29ce484222325");
}

TEST(Io, DoubleFormattingRoundTrips) {
  EXPECT_EQ(ws::format_double(0.5), "0.5");
  EXPECT_EQ(ws::format_double(0.1), "0.10000000000000001");
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = unif(rng) * std::exp2(static_cast<int>(rng() % 40) - 20);
    const std::string text = ws::format_double(v);
    EXPECT_EQ(std::strtod(text.c_str(), nullptr), v);
  }
}

TEST(Io, CsvEscapingAndShape) {
  ws::CsvBuilder csv({"name", "value"}, ws::csv_comment("none", ws::fnv1a64("cfg")));
  csv.add_row({"plain", "1.5"});
  csv.add_row({"with,comma", "quote\"inside"});
  csv.add_row({"line\nbreak", "x"});
  EXPECT_THROW(csv.add_row({"only one"}), ws::ValidationError);
  const std::string text = csv.text();
  EXPECT_EQ(text.find("# wiresecret 0.1.0 seed=none config_hash="), 0u);
  EXPECT_NE(text.find("name,value\n"), std::string::npos);
  EXPECT_NE(text.find("\"with,comma\""), std::string::npos);
  EXPECT_NE(text.find("\"quote\"\"inside\""), std::string::npos);
  EXPECT_NE(text.find("\"line\nbreak\""), std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Io, AtomicWriteCreatesAndReplaces) {
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/io_test_out.csv";
  std::remove(path.c_str());
  ws::write_file_atomic(path, "first\n");
  EXPECT_EQ(ws::read_text_file(path), "first\n");
  ws::write_file_atomic(path, "second\n");
  EXPECT_EQ(ws::read_text_file(path), "second\n");
  std::ifstream tmp(path + ".tmp");
  EXPECT_FALSE(tmp.good());
  std::remove(path.c_str());
  EXPECT_THROW(ws::read_text_file(path), ws::ValidationError);
}
