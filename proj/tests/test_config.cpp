#include <doctest.h>

#include "pmol/config.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

using namespace pmol;

namespace {

void check_round_trip(const SystemSpec& spec)
{
    const std::string text = to_config(spec);
    const SystemSpec back = parse_config_string(text);
    CHECK(to_config(back) == text); // reread must reproduce the text bit-exactly
    REQUIRE(back.num_sites() == spec.num_sites());
    CHECK(back.detuning == spec.detuning);
    CHECK(back.kerr == spec.kerr);
    CHECK(back.decay == spec.decay);
    REQUIRE(back.hops.size() == spec.hops.size());
    for (std::size_t k = 0; k < spec.hops.size(); ++k) {
        CHECK(back.hops[k].i == spec.hops[k].i);
        CHECK(back.hops[k].j == spec.hops[k].j);
        CHECK(back.hops[k].strength == spec.hops[k].strength);
        CHECK(back.hops[k].group == spec.hops[k].group);
    }
    REQUIRE(back.jc.size() == spec.jc.size());
    for (std::size_t k = 0; k < spec.jc.size(); ++k) {
        CHECK(back.jc[k].boson == spec.jc[k].boson);
        CHECK(back.jc[k].two_level == spec.jc[k].two_level);
        CHECK(back.jc[k].strength == spec.jc[k].strength);
    }
    REQUIRE(back.drives.size() == spec.drives.size());
    for (std::size_t k = 0; k < spec.drives.size(); ++k) {
        CHECK(back.drives[k].site == spec.drives[k].site);
        CHECK(back.drives[k].amplitude == spec.drives[k].amplitude);
    }
}

} // namespace

TEST_CASE("builders survive a text round trip unchanged")
{
    check_round_trip(kerr_molecule(0.275, 0.0428, 0.0428, 3.0, 1.0, 1.0, 0.01));
    check_round_trip(cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01));
    check_round_trip(single_jc_reference(1.4, 2.0, 1.0, 1.0, 0.01));
    check_round_trip(ring_of_molecules(3, 0.45, 0.0769, 3.0, 1.0, 1.0, 0.01));
}

TEST_CASE("awkward doubles survive a text round trip")
{
    SystemSpec spec = kerr_molecule(0.1, 1.0 / 3.0, 1e-17, 3.0000000000000004, 1.0, 1.0, 0.01);
    spec.detuning[1] = -0.30000000000000004;
    spec.drives[0].amplitude = Complex(0.01, -2.2250738585072014e-308);
    check_round_trip(spec);
}

TEST_CASE("comments and blank lines are ignored")
{
    const std::string text =
        "# molecule description\n"
        "\n"
        "[sites]\n"
        "0 boson 3   # monitored mode\n"
        "1 boson 3\n"
        "\n"
        "[detunings]\n"
        "0 0.275\n"
        "1 0.275\n"
        "[decays]\n"
        "0 1\n"
        "1 1\n"
        "[hops]\n"
        "0 1 3\n"
        "[drives]\n"
        "0 0.01 0\n";
    const SystemSpec spec = parse_config_string(text);
    CHECK(spec.num_sites() == 2);
    CHECK(spec.kerr == std::vector<double>{0.0, 0.0}); // omitted section defaults to zero
    CHECK(spec.hops[0].group == "J");
    CHECK(spec.drives[0].amplitude == Complex(0.01, 0.0));
}

TEST_CASE("non-default hop groups are kept, the default one is omitted")
{
    const SystemSpec ring = ring_of_molecules(2, 0.45, 0.0769, 3.0, 0.7, 1.0, 0.01);
    const std::string text = to_config(ring);
    CHECK(text.find(" J2\n") != std::string::npos);
    CHECK(text.find(" J\n") == std::string::npos);
    const SystemSpec back = parse_config_string(text);
    std::size_t j2 = 0;
    for (const Hop& h : back.hops)
        if (h.group == "J2")
            ++j2;
    CHECK(j2 == 1);
}

TEST_CASE("file save and load round trip")
{
    const std::filesystem::path path
        = std::filesystem::temp_directory_path() / "pmol_config_roundtrip.cfg";
    const SystemSpec spec = cavity_jc_molecule(0.275, 1.0, 2.0, 3.0, 1.4, 1.0, 1.0, 0.01);
    save_config(path.string(), spec);
    const SystemSpec back = load_config(path.string());
    CHECK(to_config(back) == to_config(spec));
    std::remove(path.string().c_str());

    CHECK_THROWS_AS(load_config("/nonexistent/definitely_missing.cfg"), SpecError);
}

TEST_CASE("parser rejects malformed input")
{
    const std::string good =
        "[sites]\n0 boson 2\n1 boson 2\n"
        "[detunings]\n0 0.1\n1 0.1\n"
        "[decays]\n0 1\n1 1\n"
        "[drives]\n0 0.01 0\n";
    CHECK_NOTHROW(parse_config_string(good));

    // content before any section header
    CHECK_THROWS_AS(parse_config_string("0 boson 2\n" + good), SpecError);
    // unknown section
    CHECK_THROWS_AS(parse_config_string(good + "[pumps]\n0 0.01 0\n"), SpecError);
    // unknown site kind
    CHECK_THROWS_AS(parse_config_string(
                        "[sites]\n0 fermion 2\n[detunings]\n0 0.1\n[decays]\n0 1\n"),
                    SpecError);
    // site indices must be consecutive from zero
    CHECK_THROWS_AS(parse_config_string(
                        "[sites]\n1 boson 2\n0 boson 2\n"
                        "[detunings]\n0 0.1\n1 0.1\n[decays]\n0 1\n1 1\n"
                        "[drives]\n0 0.01 0\n"),
                    SpecError);
    // zero cutoff
    CHECK_THROWS_AS(parse_config_string(
                        "[sites]\n0 boson 0\n[detunings]\n0 0.1\n[decays]\n0 1\n"),
                    SpecError);
    // missing detuning entry
    CHECK_THROWS_AS(parse_config_string(
                        "[sites]\n0 boson 2\n1 boson 2\n"
                        "[detunings]\n0 0.1\n[decays]\n0 1\n1 1\n"
                        "[drives]\n0 0.01 0\n"),
                    SpecError);
    // duplicate per-site entry
    CHECK_THROWS_AS(parse_config_string(
                        "[sites]\n0 boson 2\n1 boson 2\n"
                        "[detunings]\n0 0.1\n0 0.2\n1 0.1\n[decays]\n0 1\n1 1\n"
                        "[drives]\n0 0.01 0\n"),
                    SpecError);
    // site index out of range
    CHECK_THROWS_AS(parse_config_string(good + "[kerr]\n7 0.1\n"), SpecError);
    // wrong token count
    CHECK_THROWS_AS(parse_config_string(good + "[hops]\n0 1\n"), SpecError);
    // non-numeric value
    CHECK_THROWS_AS(parse_config_string(good + "[kerr]\n0 strong\n"), SpecError);
    // [sites] must come first
    CHECK_THROWS_AS(parse_config_string("[detunings]\n0 0.1\n" + good), SpecError);
}

TEST_CASE("parse errors carry the line number")
{
    try {
        parse_config_string("[sites]\n0 boson 2\nnot a site\n");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}
