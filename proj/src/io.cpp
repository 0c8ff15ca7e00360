#include "diqkd/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace diqkd {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_int(int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  return buf;
}

std::string hex_bits(const BitString& bits) {
  if (bits.empty()) return "-";
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (size_t k = 0; k < 4 && i + k < bits.size(); ++k)
      nibble |= (bits.get(i + k) ? 1u : 0u) << k;
    out.push_back(digits[nibble]);
  }
  return out;
}

std::string transcript_header_line(const Transcript& t) {
  std::string line = "header n=" + fmt_int(t.n) + " q=" + fmt_real(t.q) +
                     " seed=" + fmt_int(static_cast<int64_t>(t.seed)) +
                     " ec_efficiency=" + fmt_real(t.ec_efficiency) + " bound=" + t.bound_name +
                     " phase_boundary_round=" + fmt_int(static_cast<int64_t>(t.phase_boundary_round));
  return line;
}

std::string transcript_footer_line(const Transcript& t) {
  std::string line = "footer m=" + fmt_int(t.sifted.m()) + " e_size=" + fmt_int(t.sifted.e_size()) +
                     " i_est=" + (t.has_estimate ? fmt_real(t.i_est) : std::string("-")) +
                     " n_c=" + fmt_int(t.n_c) + " n_k=" + fmt_int(t.n_k) +
                     " ec_success=" + (t.ec_success ? "1" : "0") +
                     " abort=" + to_string(t.abort);
  return line;
}

void write_transcript(const Transcript& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open transcript file: " + path);
  out << transcript_header_line(t) << '\n';
  for (size_t j = 0; j < t.rounds.size(); ++j) {
    const RoundRecord& r = t.rounds[j];
    out << "round j=" << j << " u=" << int(r.u) << " v=" << int(r.v) << " x=" << int(r.x)
        << " y=" << int(r.y) << " a=" << int(r.a) << " b=" << int(r.b) << '\n';
  }
  out << transcript_footer_line(t) << '\n';
  if (!out) throw std::runtime_error("failed writing transcript file: " + path);
}

std::string serialize_public_view(const Transcript& t) {
  std::string out = "public-view v1\n";
  out += "m " + fmt_int(t.sifted.m()) + "\n";
  out += "u ";
  out.reserve(out.size() + static_cast<size_t>(t.sifted.m()) + 64);
  for (int64_t i = 0; i < t.sifted.m(); ++i)
    out.push_back(t.sifted.u_bits.get(static_cast<size_t>(i)) ? '1' : '0');
  out += "\n";
  for (size_t k = 0; k < t.sifted.est_records.size(); ++k) {
    const EstRecord& e = t.sifted.est_records[k];
    out += "est i=" + fmt_int(static_cast<int64_t>(t.sifted.est_positions[k])) +
           " a=" + std::to_string(int(e.a)) + " b=" + std::to_string(int(e.b)) +
           " x=" + std::to_string(int(e.x)) + " y=" + std::to_string(int(e.y)) + "\n";
  }
  if (!t.ec_sample_positions.empty()) {
    out += "ec_sample count=" + fmt_int(static_cast<int64_t>(t.ec_sample_positions.size())) +
           " bits=" + hex_bits(t.ec_sample_values) + "\n";
  }
  out += "ec_syndrome rows=" + fmt_int(static_cast<int64_t>(t.ec_syndrome.size())) +
         " bits=" + hex_bits(t.ec_syndrome) + "\n";
  char tag[20];
  std::snprintf(tag, sizeof tag, "%016llx", static_cast<unsigned long long>(t.ec_tag));
  out += "ec_tag " + std::string(tag) + "\n";
  out += "hash_seed in=" + fmt_int(static_cast<int64_t>(t.hash_seed.input_len)) +
         " out=" + fmt_int(static_cast<int64_t>(t.hash_seed.output_len)) +
         " bits=" + hex_bits(t.hash_seed.bits) + "\n";
  return out;
}

std::string serialize_report(const SecurityReport& r) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  };
  kv("n", fmt_int(r.n));
  kv("m", fmt_int(r.m));
  kv("e_size", fmt_int(r.e_size));
  kv("i_est", fmt_real(r.i_est));
  kv("n_c", fmt_int(r.n_c));
  kv("n_k", fmt_int(r.n_k));
  kv("beta0", fmt_real(r.beta0));
  kv("azuma_tail", fmt_real(r.azuma_tail));
  kv("good_event_lower_bound", fmt_real(r.good_event_lower_bound));
  kv("theorem_term1", fmt_real(r.theorem_term1));
  kv("theorem_term2", fmt_real(r.theorem_term2));
  kv("theorem_term3", fmt_real(r.theorem_term3));
  kv("theorem_distance_raw", fmt_real(r.theorem_distance_raw));
  kv("theorem_distance", fmt_real(r.theorem_distance));
  kv("theorem_vacuous", r.theorem_vacuous ? "1" : "0");
  kv("p_succ_bound", fmt_real(r.p_succ_bound));
  kv("eq4_factor", fmt_real(r.eq4_factor));
  kv("lemma3_factor", fmt_real(r.lemma3_factor));
  kv("factor_gap", fmt_real(r.factor_gap));
  kv("tau_argument_eq4", fmt_real(r.tau_argument_eq4));
  kv("tau_eq4", fmt_real(r.tau_eq4));
  kv("tau_argument_lemma3", fmt_real(r.tau_argument_lemma3));
  kv("tau_lemma3", fmt_real(r.tau_lemma3));
  return out;
}

std::string serialize_report(const SecurityReport& r, const Transcript& t) {
  std::string out = serialize_report(r);
  out += "ec_success = ";
  out += t.ec_success ? "1" : "0";
  out += "\nabort = ";
  out += to_string(t.abort);
  out += "\n";
  return out;
}

std::string rate_curve_csv(const std::vector<RatePoint>& points) {
  std::string out = "noise,visibility,chsh_value,rate_qm,rate_ns,rate_qm_clamped,rate_ns_clamped\n";
  for (const RatePoint& p : points) {
    out += fmt_real(p.noise) + "," + fmt_real(p.visibility) + "," + fmt_real(p.chsh_value) + "," +
           fmt_real(p.rate_qm) + "," + fmt_real(p.rate_ns) + "," + fmt_real(p.rate_qm_clamped) +
           "," + fmt_real(p.rate_ns_clamped) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

} // namespace diqkd
