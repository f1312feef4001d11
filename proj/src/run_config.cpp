#include "ats/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ats {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" +
                      value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw ConfigError("split_fraction must be strictly between 0 and 1");
  }
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
  if (vocab_max_size < 5) throw ConfigError("vocab_max_size must be at least 5");
  if (vocab_min_freq == 0) throw ConfigError("vocab_min_freq must be at least 1");
  // vocab_size is derived from the data later; validate the rest now.
  HyperParams probe = hyper;
  probe.vocab_size = vocab_max_size;
  probe.validate();
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "dataset_path = " << dataset_path << '\n'
     << "text_column = " << text_column << '\n'
     << "summary_column = " << summary_column << '\n'
     << "embed_dim = " << hyper.embed_dim << '\n'
     << "enc_hidden = " << hyper.enc_hidden << '\n'
     << "dec_hidden = " << hyper.dec_hidden << '\n'
     << "attn_dim = " << hyper.attn_dim << '\n'
     << "max_in_len = " << hyper.max_in_len << '\n'
     << "max_out_len = " << hyper.max_out_len << '\n'
     << "batch_size = " << hyper.batch_size << '\n'
     << "epochs = " << hyper.epochs << '\n'
     << "seed = " << hyper.seed << '\n'
     << "vocab_max_size = " << vocab_max_size << '\n'
     << "vocab_min_freq = " << vocab_min_freq << '\n'
     << "split_fraction = " << format_double(split_fraction) << '\n'
     << "learning_rate = " << format_double(learning_rate) << '\n'
     << "output_dir = " << output_dir << '\n';
  return os.str();
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        " is not key = value: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "dataset_path") cfg.dataset_path = value;
    else if (key == "text_column") cfg.text_column = value;
    else if (key == "summary_column") cfg.summary_column = value;
    else if (key == "embed_dim") cfg.hyper.embed_dim = parse_size(key, value);
    else if (key == "enc_hidden") cfg.hyper.enc_hidden = parse_size(key, value);
    else if (key == "dec_hidden") cfg.hyper.dec_hidden = parse_size(key, value);
    else if (key == "attn_dim") cfg.hyper.attn_dim = parse_size(key, value);
    else if (key == "max_in_len") cfg.hyper.max_in_len = parse_size(key, value);
    else if (key == "max_out_len") cfg.hyper.max_out_len = parse_size(key, value);
    else if (key == "batch_size") cfg.hyper.batch_size = parse_size(key, value);
    else if (key == "epochs") cfg.hyper.epochs = parse_size(key, value);
    else if (key == "seed") cfg.hyper.seed = parse_size(key, value);
    else if (key == "vocab_max_size") cfg.vocab_max_size = parse_size(key, value);
    else if (key == "vocab_min_freq") cfg.vocab_min_freq = parse_size(key, value);
    else if (key == "split_fraction") cfg.split_fraction = parse_double(key, value);
    else if (key == "learning_rate") cfg.learning_rate = parse_double(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return from_text(buffer.str());
}

void RunConfig::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open config file for writing: " + path);
  os << to_text();
}

RunConfig RunConfig::profile(const std::string& name) {
  RunConfig cfg;  // HyperParams defaults are the paper-scale settings
  if (name == "paper") {
    return cfg;
  }
  if (name == "toy") {
    cfg.hyper.embed_dim = 32;
    cfg.hyper.enc_hidden = 32;
    cfg.hyper.dec_hidden = 64;
    cfg.hyper.attn_dim = 64;
    cfg.hyper.max_in_len = 30;
    cfg.hyper.max_out_len = 12;
    cfg.hyper.batch_size = 8;
    cfg.hyper.epochs = 300;
    cfg.vocab_max_size = 300;
    cfg.vocab_min_freq = 1;
    return cfg;
  }
  throw ConfigError("unknown profile '" + name + "' (expected 'paper' or 'toy')");
}

}  // namespace ats
