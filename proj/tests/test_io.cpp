#include <doctest.h>

#include <nlohmann/json.hpp>

#include "framelab/io.hpp"

using namespace framelab;

TEST_CASE("frame CSV round trip is byte exact") {
  const Frame f = make_gaussian_frame(4, 7, 99);
  const std::string csv = frame_to_csv(f);
  const Frame back = frame_from_csv(csv);
  CHECK((f.data - back.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK(frame_to_csv(back) == csv);
  CHECK(csv.substr(0, 4) == "4,7\n");
}

TEST_CASE("frame CSV rejects malformed input") {
  CHECK_THROWS_AS(frame_from_csv(""), Error);
  CHECK_THROWS_AS(frame_from_csv("2,2\n1.0,2.0\n"), Error);    // missing row
  CHECK_THROWS_AS(frame_from_csv("2,2\n1.0\n1.0,2.0\n"), Error);  // short row
}

TEST_CASE("histogram and moment CSV layouts") {
  SpectrumHistogram h;
  h.bin_edges = {0.0, 0.5, 1.0};
  h.counts = {3, 7};
  h.total_samples = 10;
  const std::string csv = histogram_to_csv(h);
  CHECK(csv == "bin_lo,bin_hi,count\n0,0.5,3\n0.5,1,7\n");

  std::vector<MomentEstimate> moments{{1, 0.5, 0.01, 100}};
  CHECK(moments_to_csv(moments) ==
        "d,value,std_error,trials\n1,0.5,0.01,100\n");
}

TEST_CASE("trace CSV column layout") {
  MetricTrace t;
  t.records.push_back({0, 1.5, std::nan(""), 0.25, 0.5, 1.75});
  const std::string csv = trace_to_csv(t);
  CHECK(csv.substr(0, 43) == "step,train_mse,test_mse,cl,coherence,loss\n0");
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("estimate JSON fields") {
  EstimateResult e{1.25, 0.5, 100, 3, 42};
  const auto j = estimate_to_json(e);
  CHECK(j["estimate"] == 1.25);
  CHECK(j["std_error"] == 0.5);
  CHECK(j["trials"] == 100);
  CHECK(j["skipped_singular"] == 3);
  CHECK(j["seed"] == 42);
}

TEST_CASE("identical inputs serialize identically") {
  const Frame a = make_gaussian_frame(3, 5, 1);
  const Frame b = make_gaussian_frame(3, 5, 1);
  CHECK(frame_to_csv(a) == frame_to_csv(b));
}
