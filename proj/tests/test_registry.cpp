// Descriptor registry: construction, validation, duality, JSON codec.

#include <catch2/catch_amalgamated.hpp>

#include "pvzeta/space.hpp"

using namespace pvz;

TEST_CASE("all built-ins validate", "[registry]") {
  for (const auto& nm : builtin_names()) {
    const SpaceDesc& d = builtin_space(nm);
    ValidationReport rep = validate(d);
    for (const auto& c : rep.checks) {
      CAPTURE(nm, c.name, c.detail);
      CHECK(c.pass);
    }
    CHECK(d.rank == 1);
    CHECK(d.k_orbits() >= 1);
  }
}

TEST_CASE("registry inventory", "[registry]") {
  CHECK(builtin_names().size() == 5);
  CHECK(builtin_space("TATE").dim == 1);
  CHECK(builtin_space("TATE").k_orbits() == 2);
  CHECK(builtin_space("QF_2_0").k_orbits() == 1);
  CHECK(builtin_space("QF_1_1").k_orbits() == 2);
  CHECK(builtin_space("QF_3_0").k_orbits() == 1);
  CHECK(builtin_space("QF_2_1").k_orbits() == 2);
  CHECK(builtin_space("QF_3_0").lambda0[0] == rat(3, 4));
  CHECK(builtin_space("QF_2_1").measure_exp[0] == rat(3, 2));
  CHECK_THROWS_AS(builtin_space("NOPE"), NotFoundError);
}

TEST_CASE("duality is an involution with negated frame", "[registry]") {
  for (const auto& nm : builtin_names()) {
    const SpaceDesc& d = builtin_space(nm);
    SpaceDesc dd = dual(d);
    CHECK(dd.orientation == -d.orientation);
    CHECK(dd.lambda0[0] == -d.lambda0[0]);
    CHECK(dd.f[0] == d.fdual[0]);
    CHECK(dd.fdual[0] == d.f[0]);
    CHECK(dd.bfun[0] == d.bfun[0]);  // symmetric pairs in the registry
    CHECK(validate(dd).all_pass());

    SpaceDesc back = dual(dd);
    CHECK(back.name == d.name);
    CHECK(back.orientation == d.orientation);
    CHECK(back.lambda0[0] == d.lambda0[0]);
    CHECK(back.f[0] == d.f[0]);
    for (int i = 0; i < d.k_orbits(); ++i) {
      CHECK(back.orbits[i].sample == d.orbits[i].sample);
      CHECK(back.orbits[i].sign == d.orbits[i].sign);
    }
    // Orbit identification preserves the sign label on this family.
    for (int i = 0; i < d.k_orbits(); ++i) CHECK(dd.orbits[i].sign == d.orbits[i].sign);
  }
  CHECK(&builtin_space("TATE_DUAL") != nullptr);
  CHECK(builtin_space("QF_2_1_DUAL").orientation == -1);
}

TEST_CASE("json round trip preserves every field", "[registry]") {
  for (const auto& nm : builtin_names()) {
    for (bool use_dual : {false, true}) {
      const SpaceDesc& d = builtin_space(use_dual ? nm + "_DUAL" : nm);
      Json j = space_to_json(d);
      SpaceDesc r = space_from_json(j);
      CHECK(r.name == d.name);
      CHECK(r.dim == d.dim);
      CHECK(r.rank == d.rank);
      CHECK(r.f[0] == d.f[0]);
      CHECK(r.fdual[0] == d.fdual[0]);
      CHECK(r.degrees == d.degrees);
      CHECK(r.lambda0[0] == d.lambda0[0]);
      CHECK(r.measure_exp[0] == d.measure_exp[0]);
      CHECK(r.orientation == d.orientation);
      CHECK(r.bfun[0] == d.bfun[0]);
      CHECK(r.kappa[0] == d.kappa[0]);
      CHECK(r.d_coeffs == d.d_coeffs);
      REQUIRE(r.orbits.size() == d.orbits.size());
      for (std::size_t i = 0; i < d.orbits.size(); ++i) {
        CHECK(r.orbits[i].sign == d.orbits[i].sign);
        CHECK(r.orbits[i].sample == d.orbits[i].sample);
        CHECK(r.orbits[i].kind == d.orbits[i].kind);
        CHECK(r.orbits[i].p == d.orbits[i].p);
        CHECK(r.orbits[i].q == d.orbits[i].q);
      }
      CHECK(validate(r).all_pass());
      // Serialization is deterministic byte for byte.
      CHECK(space_to_json(r).dump(2) == j.dump(2));
    }
  }
}

TEST_CASE("corrupted descriptors fail validation", "[registry]") {
  SECTION("wrong bernstein polynomial") {
    SpaceDesc d = make_builtin("QF_2_0");
    d.bfun[0] = d.bfun[0] * Rat(2);
    ValidationReport rep = validate(d);
    bool bad = false;
    for (const auto& c : rep.checks)
      if (c.name == "bfun_certified" && !c.pass) bad = true;
    CHECK(bad);
    CHECK_FALSE(rep.all_pass());
  }
  SECTION("sample point in the wrong chamber") {
    SpaceDesc d = make_builtin("TATE");
    d.orbits[1].sample = {Rat(5)};  // claims sign -1 but f > 0
    CHECK_FALSE(validate(d).all_pass());
  }
  SECTION("broken normalization exponent") {
    SpaceDesc d = make_builtin("QF_3_0");
    d.lambda0[0] = rat(1, 2);
    ValidationReport rep = validate(d);
    bool bad = false;
    for (const auto& c : rep.checks)
      if (c.name == "lambda0_lattice" && !c.pass) bad = true;
    CHECK(bad);
  }
  SECTION("measure exponent out of step") {
    SpaceDesc d = make_builtin("QF_1_1");
    d.measure_exp[0] = Rat(2);
    CHECK_FALSE(validate(d).all_pass());
  }
  SECTION("non-invariant polynomial is not eigen") {
    SpaceDesc d = make_builtin("TATE");
    d.f[0] = QPoly::monomial(1, {3}, Rat(1));
    d.degrees = {{3, 1}};
    d.d_coeffs = {1};
    ValidationReport rep = validate(d);
    CHECK_FALSE(rep.all_pass());
  }
  SECTION("higher rank is rejected") {
    SpaceDesc d = make_builtin("TATE");
    d.rank = 2;
    CHECK_THROWS_AS(validate(d), UnsupportedRankError);
  }
}

TEST_CASE("identification map is a rational involution", "[registry]") {
  for (const auto& nm : builtin_names()) {
    const SpaceDesc& d = builtin_space(nm);
    for (const auto& oc : d.orbits) {
      auto img = identification_map(d.f[0], oc.sample);
      auto back = identification_map(d.fdual[0], img);
      CHECK(back == oc.sample);
    }
  }
}
