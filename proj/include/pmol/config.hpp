#ifndef PMOL_CONFIG_HPP
#define PMOL_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "pmol/models.hpp"

namespace pmol {

// Plain-text system description, one section per SystemSpec field.
//
//   # comments run to end of line; blank lines are ignored
//   [sites]      one line per site: "<index> boson <n_max>" or "<index> twolevel"
//   [detunings]  "<site> <value>"   (rotating-frame detuning, gamma_ref units)
//   [kerr]       "<site> <value>"   (omitted entries default to 0)
//   [hops]       "<i> <j> <strength> [group]"
//   [jc]         "<boson> <two_level> <strength>"
//   [drives]     "<site> <re> <im>"
//   [decays]     "<site> <value>"
//
// Sites, detunings, and decays must cover every site exactly once.  All
// numbers are written with 17 significant digits so a reread reproduces the
// spec bit-exactly.

void write_config(std::ostream& out, const SystemSpec& spec);
std::string to_config(const SystemSpec& spec);
void save_config(const std::string& path, const SystemSpec& spec);

SystemSpec parse_config(std::istream& in);
SystemSpec parse_config_string(const std::string& text);
SystemSpec load_config(const std::string& path);

} // namespace pmol

#endif
