#include "pmol/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "pmol/errors.hpp"
#include "pmol/format.hpp"

namespace pmol {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> tokenize(const std::string& line)
{
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok)
        tokens.push_back(tok);
    return tokens;
}

[[noreturn]] void fail(int line_no, const std::string& what)
{
    throw SpecError("config line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& tok, int line_no)
{
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + tok.size())
        fail(line_no, "expected a number, got '" + tok + "'");
    return value;
}

std::size_t parse_index(const std::string& tok, int line_no)
{
    for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            fail(line_no, "expected a site index, got '" + tok + "'");
    return static_cast<std::size_t>(std::strtoull(tok.c_str(), nullptr, 10));
}

// Per-site scalar sections ([detunings], [kerr], [decays]) collect into an
// index->value map so completeness can be checked once the site count is known.
struct PerSite {
    std::vector<std::optional<double>> values;
    std::string section;

    void set(std::size_t site, double value, int line_no)
    {
        if (site >= values.size())
            fail(line_no, section + ": site index " + std::to_string(site) + " out of range");
        if (values[site].has_value())
            fail(line_no, section + ": duplicate entry for site " + std::to_string(site));
        values[site] = value;
    }

    std::vector<double> finish(double fallback, bool allow_missing) const
    {
        std::vector<double> out(values.size(), fallback);
        for (std::size_t s = 0; s < values.size(); ++s) {
            if (values[s].has_value())
                out[s] = *values[s];
            else if (!allow_missing)
                throw SpecError("config: [" + section + "] is missing site " + std::to_string(s));
        }
        return out;
    }
};

void write_per_site(std::ostream& out, const std::string& name, const std::vector<double>& values)
{
    out << '[' << name << "]\n";
    for (std::size_t s = 0; s < values.size(); ++s)
        out << s << ' ' << fmt_g17(values[s]) << '\n';
}

} // namespace

void write_config(std::ostream& out, const SystemSpec& spec)
{
    out << "[sites]\n";
    for (std::size_t s = 0; s < spec.sites.size(); ++s) {
        out << s << ' ';
        if (spec.sites[s].is_boson())
            out << "boson " << spec.sites[s].n_max;
        else
            out << "twolevel";
        out << '\n';
    }
    write_per_site(out, "detunings", spec.detuning);
    write_per_site(out, "kerr", spec.kerr);
    out << "[hops]\n";
    for (const Hop& h : spec.hops) {
        out << h.i << ' ' << h.j << ' ' << fmt_g17(h.strength);
        if (h.group != "J")
            out << ' ' << h.group;
        out << '\n';
    }
    out << "[jc]\n";
    for (const JcCoupling& c : spec.jc)
        out << c.boson << ' ' << c.two_level << ' ' << fmt_g17(c.strength) << '\n';
    out << "[drives]\n";
    for (const Drive& d : spec.drives)
        out << d.site << ' ' << fmt_g17(d.amplitude.real()) << ' ' << fmt_g17(d.amplitude.imag())
            << '\n';
    write_per_site(out, "decays", spec.decay);
}

std::string to_config(const SystemSpec& spec)
{
    std::ostringstream out;
    write_config(out, spec);
    return out.str();
}

void save_config(const std::string& path, const SystemSpec& spec)
{
    std::ofstream out(path);
    if (!out)
        throw SpecError("cannot open '" + path + "' for writing");
    write_config(out, spec);
    if (!out.flush())
        throw SpecError("failed writing '" + path + "'");
}

SystemSpec parse_config(std::istream& in)
{
    SystemSpec spec;
    PerSite detunings{{}, "detunings"};
    PerSite kerr{{}, "kerr"};
    PerSite decays{{}, "decays"};

    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "sites" && section != "detunings" && section != "kerr"
                && section != "hops" && section != "jc" && section != "drives"
                && section != "decays")
                fail(line_no, "unknown section '" + section + "'");
            if (section != "sites" && spec.sites.empty())
                fail(line_no, "[sites] must come first");
            const std::size_t n = spec.sites.size();
            detunings.values.resize(n);
            kerr.values.resize(n);
            decays.values.resize(n);
            continue;
        }
        const std::vector<std::string> tokens = tokenize(line);
        if (section.empty())
            fail(line_no, "content before the first section header");
        if (section == "sites") {
            const std::size_t index = parse_index(tokens[0], line_no);
            if (index != spec.sites.size())
                fail(line_no, "site indices must run 0,1,2,... in order");
            if (tokens.size() == 3 && tokens[1] == "boson") {
                const std::size_t n_max = parse_index(tokens[2], line_no);
                if (n_max == 0)
                    fail(line_no, "boson n_max must be at least 1");
                spec.sites.push_back(SiteKind::boson(static_cast<int>(n_max)));
            } else if (tokens.size() == 2 && tokens[1] == "twolevel") {
                spec.sites.push_back(SiteKind::two_level());
            } else {
                fail(line_no, "expected '<index> boson <n_max>' or '<index> twolevel'");
            }
        } else if (section == "detunings" || section == "kerr" || section == "decays") {
            if (tokens.size() != 2)
                fail(line_no, "[" + section + "] lines are '<site> <value>'");
            PerSite& dest = section == "detunings" ? detunings
                : section == "kerr"                ? kerr
                                                   : decays;
            dest.set(parse_index(tokens[0], line_no), parse_double(tokens[1], line_no), line_no);
        } else if (section == "hops") {
            if (tokens.size() != 3 && tokens.size() != 4)
                fail(line_no, "[hops] lines are '<i> <j> <strength> [group]'");
            Hop hop;
            hop.i = parse_index(tokens[0], line_no);
            hop.j = parse_index(tokens[1], line_no);
            hop.strength = parse_double(tokens[2], line_no);
            if (tokens.size() == 4)
                hop.group = tokens[3];
            spec.hops.push_back(hop);
        } else if (section == "jc") {
            if (tokens.size() != 3)
                fail(line_no, "[jc] lines are '<boson> <two_level> <strength>'");
            spec.jc.push_back({parse_index(tokens[0], line_no), parse_index(tokens[1], line_no),
                               parse_double(tokens[2], line_no)});
        } else if (section == "drives") {
            if (tokens.size() != 3)
                fail(line_no, "[drives] lines are '<site> <re> <im>'");
            spec.drives.push_back({parse_index(tokens[0], line_no),
                                   Complex(parse_double(tokens[1], line_no),
                                           parse_double(tokens[2], line_no))});
        }
    }
    if (spec.sites.empty())
        throw SpecError("config: no [sites] section");
    detunings.values.resize(spec.sites.size());
    kerr.values.resize(spec.sites.size());
    decays.values.resize(spec.sites.size());
    spec.detuning = detunings.finish(0.0, false);
    spec.kerr = kerr.finish(0.0, true);
    spec.decay = decays.finish(0.0, false);
    spec.validate();
    return spec;
}

SystemSpec parse_config_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

SystemSpec load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SpecError("cannot open config '" + path + "'");
    try {
        return parse_config(in);
    } catch (const SpecError& err) {
        throw SpecError(path + ": " + err.what());
    }
}

} // namespace pmol
