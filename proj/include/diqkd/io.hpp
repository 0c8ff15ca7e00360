#pragma once

#include <string>
#include <vector>

#include "diqkd/protocol.hpp"
#include "diqkd/rates.hpp"
#include "diqkd/security_report.hpp"

namespace diqkd {

// Fixed decimal formatting for all numeric output: 17 significant digits, so
// files diff stably across runs and platforms.
std::string fmt_real(double v);
std::string fmt_int(int64_t v);

std::string hex_bits(const BitString& bits); // LSB-first nibble hex, "-" when empty

// Line-delimited transcript: one self-describing record per line; a header
// record with the run parameters, one round record per retained round, and a
// footer with the summary. Append-only during a run.
void write_transcript(const Transcript& transcript, const std::string& path);
std::string transcript_header_line(const Transcript& transcript);
std::string transcript_footer_line(const Transcript& transcript);

// The adversary's view W plus the later public messages: sifted u values,
// (a,b,x,y) for the estimation set, the EC syndrome and tag, and the hash
// seed. Key-round outputs and inputs never appear here.
std::string serialize_public_view(const Transcript& transcript);

// SecurityReport as a flat key-value block with fixed field order.
std::string serialize_report(const SecurityReport& report, const Transcript& transcript);
std::string serialize_report(const SecurityReport& report);

std::string rate_curve_csv(const std::vector<RatePoint>& points);

void write_text_file(const std::string& path, const std::string& content);

} // namespace diqkd
