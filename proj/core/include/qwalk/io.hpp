#pragma once

// Text round-trip for profiles and occupation fields, plus a small CSV
// table writer. All numbers are written in shortest round-trip decimal
// form, so saving and reloading reproduces values bit for bit and reruns
// produce byte-identical files.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qwalk/analytics.hpp"
#include "qwalk/ensemble.hpp"

namespace qwalk {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Reads a profile as `x value` rows. Blank lines and lines starting with
/// '#' are skipped; errors carry the source name and line number.
Profile load_profile(std::istream& in, const std::string& source_name);
Profile load_profile_file(const std::string& path);

void save_profile(std::ostream& out, const Profile& profile);
void save_profile_file(const std::string& path, const Profile& profile);

/// Writes a batch of fields sharing one scale and step count as
/// `site count` rows (nonzero counts only) under per-replica markers.
void save_fields(std::ostream& out, std::span<const OccupationField> fields);

/// Reads a batch written by save_fields. The reconstructed window of each
/// field spans its stored rows, so counts round-trip exactly while zero
/// padding does not.
std::vector<OccupationField> load_fields(std::istream& in,
                                         const std::string& source_name);

/// CSV with leading '#' comment lines, a column-name row, and numeric
/// cells in round-trip form.
void write_csv(std::ostream& out, std::span<const std::string> comments,
               std::span<const std::string> columns,
               const std::vector<std::vector<double>>& rows);

} // namespace qwalk
