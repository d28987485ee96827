#include <set>

#include "doctest.h"
#include "takagi/analysis.hpp"
#include "takagi/report.hpp"

using namespace takagi;

TEST_CASE("batched evaluation matches per-point evaluation") {
  const MetricField g = find_manifold("schwarzschild")->metric();
  GeometryBuilder geo(g, invert_metric(g));
  const Connection conn = geo.christoffel_classical();
  const Tensor r = geo.riemann_classical(conn);
  const auto pts = sample_points(g.chart, 9, 5);

  TensorBatch batch;
  const std::size_t ig = batch.add(g.g);
  const std::size_t ir = batch.add(r);
  batch.evaluate(pts, simd::scalar_kernels());
  CHECK(batch.points() == 9);
  CHECK(batch.components(ir) == 256);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const NumTensor v = evaluate(r, pts[p]);
    for (std::size_t k = 0; k < v.size(); ++k) {
      CHECK(std::abs(batch.value(ir, k, p) - v.components()[k]) <= 1e-12 * (1 + std::abs(v.components()[k])));
    }
  }
  CHECK(batch.max_imag(ig) == 0.0);
  CHECK(batch.max_abs_diff(ig, ig) == 0.0);
  const auto per_point = batch.max_abs_per_point(ig);
  CHECK(per_point.size() == 9);

  for (simd::Isa isa : {simd::Isa::Avx2, simd::Isa::Neon}) {
    const simd::LaneKernels* k = simd::kernels_for(isa);
    if (!k) continue;
    TensorBatch fast;
    fast.add(g.g);
    fast.add(r);
    fast.evaluate(pts, *k);
    const auto a = batch.values(ir), b = fast.values(1);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
    CHECK(fast.max_abs(1) == batch.max_abs(ir));
  }
}

TEST_CASE("identity names are unique and the suite passes") {
  for (const char* name : {"sphere2", "minkowski-cylindrical"}) {
    AnalysisOptions opts;
    const AnalysisReport rep = analyze(*find_manifold(name), opts);
    std::set<std::string> names;
    for (const IdentityResult& r : rep.identities) CHECK(names.insert(r.name).second);
    CHECK(rep.all_pass());
    CHECK(rep.find("reconstruction") != nullptr);
    CHECK(rep.find("no such identity") == nullptr);
    CHECK(rep.decomposition_residual.size() == 20);
    CHECK(rep.killing.size() == rep.coordinates.size());
  }
}

TEST_CASE("the numeric strategy skips derivative identities") {
  AnalysisOptions opts;
  opts.strategy = Strategy::Numeric;
  const AnalysisReport rep = analyze(*find_manifold("schwarzschild"), opts);
  CHECK(rep.classification.verdict == Flatness::Undetermined);
  CHECK(rep.decomposition_residual.empty());
  CHECK(rep.find("reconstruction")->status == Status::Pass);
  const IdentityResult* s = rep.find("S route agreement");
  REQUIRE(s != nullptr);
  CHECK(s->status == Status::Skipped);
  CHECK(rep.all_pass());
}

TEST_CASE("tolerance scale drives failures") {
  AnalysisOptions opts;
  opts.tol_scale = 1e-30;
  const AnalysisReport rep = analyze(*find_manifold("schwarzschild"), opts);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("reports are deterministic and independent of the kernels") {
  AnalysisOptions a;
  a.seed = 11;
  a.kernels = &simd::scalar_kernels();
  AnalysisOptions b = a;
  b.kernels = &simd::active_kernels();
  const ManifoldSpec& spec = *find_manifold("flrw-flat");
  const std::string x = dump_json(to_json(analyze(spec, a), false));
  CHECK(x == dump_json(to_json(analyze(spec, a), false)));
  CHECK(x == dump_json(to_json(analyze(spec, b), false)));
  a.seed = 12;
  CHECK(x != dump_json(to_json(analyze(spec, a), false)));
}

TEST_CASE("JSON numbers keep 17 significant digits") {
  Json j;
  j["x"] = 0.1;
  CHECK(dump_json(j).find("0.10000000000000001") != std::string::npos);
  CHECK(complex_json({1.0, -2.0}).dump() == "[1.0,-2.0]");
}
