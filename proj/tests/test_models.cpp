#include <doctest.h>

#include "pmol/models.hpp"

#include <cmath>

using namespace pmol;

TEST_CASE("two-mode kerr molecule has the expected layout")
{
    const SystemSpec spec = kerr_molecule(0.275, 0.0428, 0.0428, 3.0, 1.0, 1.0, 0.01);
    CHECK(spec.num_sites() == 2);
    CHECK(spec.sites[0].is_boson());
    CHECK(spec.sites[1].is_boson());
    CHECK(spec.sites[0].n_max == 3);
    CHECK(spec.detuning[0] == 0.275);
    CHECK(spec.detuning[1] == 0.275);
    CHECK(spec.kerr[0] == 0.0428);
    CHECK(spec.hops.size() == 1);
    CHECK(spec.hops[0].i == 0);
    CHECK(spec.hops[0].j == 1);
    CHECK(spec.hops[0].strength == 3.0);
    CHECK(spec.hops[0].group == "J");
    CHECK(spec.jc.empty());
    REQUIRE(spec.drives.size() == 1);
    CHECK(spec.drives[0].site == 0); // pump enters through the first mode only
    CHECK(spec.drives[0].amplitude == Complex(0.01, 0.0));
    CHECK(spec.decay == std::vector<double>{1.0, 1.0});
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("kerr molecule accepts a linear first mode")
{
    const SystemSpec spec = kerr_molecule(0.1, 0.0, 0.05, 2.0, 1.0, 1.0, 0.01);
    CHECK(spec.kerr[0] == 0.0);
    CHECK(spec.kerr[1] == 0.05);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("cavity plus emitter molecule wires the ladder of detunings")
{
    const SystemSpec spec = cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01);
    REQUIRE(spec.num_sites() == 3);
    CHECK(spec.sites[0].is_boson());
    CHECK(spec.sites[1].is_boson());
    CHECK(!spec.sites[2].is_boson());
    CHECK(spec.detuning[0] == doctest::Approx(0.275).epsilon(1e-15));
    CHECK(spec.detuning[1] == doctest::Approx(1.275).epsilon(1e-15));
    CHECK(spec.detuning[2] == doctest::Approx(3.275).epsilon(1e-15));
    CHECK(spec.kerr == std::vector<double>{0.0, 0.0, 0.0});
    REQUIRE(spec.hops.size() == 1);
    CHECK(spec.hops[0].i == 0);
    CHECK(spec.hops[0].j == 1);
    REQUIRE(spec.jc.size() == 1);
    CHECK(spec.jc[0].boson == 1);
    CHECK(spec.jc[0].two_level == 2);
    CHECK(spec.jc[0].strength == 1.4);
    CHECK(spec.decay == std::vector<double>{1.0, 1.0, 1.0});
    REQUIRE(spec.drives.size() == 1);
    CHECK(spec.drives[0].site == 0);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("single cavity-emitter reference is pumped at its lower branch")
{
    const double g = 1.4;
    const double split = 2.0;
    const SystemSpec spec = single_jc_reference(g, split, 1.0, 1.0, 0.01);
    REQUIRE(spec.num_sites() == 2);
    CHECK(spec.sites[0].is_boson());
    CHECK(!spec.sites[1].is_boson());
    // lower dressed one-particle level sits at -sqrt((split/2)^2 + g^2) + split/2
    // below the bare cavity, so the cavity detuning compensates exactly that.
    const double expected = std::sqrt(0.25 * split * split + g * g) - 0.5 * split;
    CHECK(spec.detuning[0] == doctest::Approx(expected).epsilon(1e-15));
    CHECK(spec.detuning[1] == doctest::Approx(expected + split).epsilon(1e-15));
    CHECK(spec.hops.empty());
    REQUIRE(spec.jc.size() == 1);
    CHECK(spec.jc[0].strength == g);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("ring couples the driven modes in a cycle")
{
    const SystemSpec ring = ring_of_molecules(3, 0.45, 0.0769, 3.0, 1.0, 1.0, 0.01);
    REQUIRE(ring.num_sites() == 6);
    for (std::size_t s = 0; s < 6; ++s) {
        CHECK(ring.sites[s].is_boson());
        CHECK(ring.detuning[s] == 0.45);
        CHECK(ring.kerr[s] == 0.0769);
        CHECK(ring.decay[s] == 1.0);
    }
    std::size_t intra = 0;
    std::size_t cycle = 0;
    for (const Hop& h : ring.hops) {
        if (h.group == "J") {
            ++intra;
            CHECK(h.j == h.i + 1);
            CHECK(h.i % 2 == 0);
            CHECK(h.strength == 3.0);
        } else {
            ++cycle;
            CHECK(h.group == "J2");
            CHECK(h.i % 2 == 0);
            CHECK(h.j % 2 == 0);
            CHECK(h.strength == 1.0);
        }
    }
    CHECK(intra == 3);
    CHECK(cycle == 3);
    REQUIRE(ring.drives.size() == 3);
    for (const Drive& d : ring.drives) {
        CHECK(d.site % 2 == 0); // pump feeds the ring-facing mode of each molecule
        CHECK(d.amplitude == Complex(0.01, 0.0));
    }
    CHECK_NOTHROW(ring.validate());
}

TEST_CASE("two-molecule ring collapses the cycle to a single link")
{
    const SystemSpec ring = ring_of_molecules(2, 0.45, 0.0769, 3.0, 0.7, 1.0, 0.01);
    std::size_t cycle = 0;
    for (const Hop& h : ring.hops)
        if (h.group == "J2")
            ++cycle;
    CHECK(cycle == 1);
    CHECK_NOTHROW(ring.validate());
}

TEST_CASE("ring needs at least two molecules")
{
    CHECK_THROWS_AS(ring_of_molecules(1, 0.45, 0.0769, 3.0, 1.0, 1.0, 0.01), SpecError);
}

TEST_CASE("boson cutoff override rebuilds every boson site")
{
    const SystemSpec spec = kerr_molecule(0.275, 0.0428, 0.0428, 3.0, 1.0, 1.0, 0.01);
    const SystemSpec wider = spec.with_boson_cutoff(5);
    CHECK(wider.sites[0].n_max == 5);
    CHECK(wider.sites[1].n_max == 5);
    CHECK(wider.detuning == spec.detuning);
    CHECK(wider.hops.size() == spec.hops.size());

    const SystemSpec mixed = cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01);
    const SystemSpec mixed_wider = mixed.with_boson_cutoff(4);
    CHECK(mixed_wider.sites[0].n_max == 4);
    CHECK(mixed_wider.sites[1].n_max == 4);
    CHECK(!mixed_wider.sites[2].is_boson()); // two-level sites are untouched
}

TEST_CASE("basis construction honours the cutoff")
{
    const SystemSpec spec = kerr_molecule(0.275, 0.0428, 0.0428, 3.0, 1.0, 1.0, 0.01, 3);
    CHECK(spec.basis().dim() == 16);
    CHECK(spec.with_boson_cutoff(2).basis().dim() == 9);
}

TEST_CASE("validation rejects malformed systems")
{
    const SystemSpec good = kerr_molecule(0.275, 0.0428, 0.0428, 3.0, 1.0, 1.0, 0.01);

    SystemSpec s = good;
    s.detuning.pop_back();
    CHECK_THROWS_AS(s.validate(), SpecError);

    s = good;
    s.decay[1] = -0.5;
    CHECK_THROWS_AS(s.validate(), SpecError);

    s = good;
    s.decay = {0.0, 0.0};
    CHECK_THROWS_AS(s.validate(), SpecError); // no loss channel, no unique steady state

    s = good;
    s.hops.push_back({0, 1, 2.0, "J"});
    CHECK_THROWS_AS(s.validate(), SpecError); // duplicate pair

    s = good;
    s.hops[0] = {0, 0, 2.0, "J"};
    CHECK_THROWS_AS(s.validate(), SpecError); // self loop

    s = good;
    s.hops[0] = {0, 7, 2.0, "J"};
    CHECK_THROWS_AS(s.validate(), SpecError);

    s = good;
    s.drives[0].site = 5;
    CHECK_THROWS_AS(s.validate(), SpecError);

    s = good;
    s.kerr[0] = std::nan("");
    CHECK_THROWS_AS(s.validate(), SpecError);

    SystemSpec jc = cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01);
    jc.kerr[2] = 0.1;
    CHECK_THROWS_AS(jc.validate(), SpecError); // an anharmonicity on a two-level site is meaningless

    jc = cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01);
    jc.drives[0].site = 2;
    CHECK_THROWS_AS(jc.validate(), SpecError); // only boson modes are pumped

    jc = cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01);
    jc.jc[0] = {2, 1, 1.4};
    CHECK_THROWS_AS(jc.validate(), SpecError); // sides swapped

    SystemSpec empty;
    CHECK_THROWS_AS(empty.validate(), SpecError);
}
