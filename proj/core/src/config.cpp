#include "aqft/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aqft {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_switch(const std::string& value, const std::string& key) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad switch value for " + key);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: missing '=' on line " +
                                  std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::istringstream vs(value);
    if (key == "n_x") {
      vs >> config.n_x;
    } else if (key == "n_t") {
      vs >> config.n_t;
    } else if (key == "dx") {
      vs >> config.dx;
    } else if (key == "dt") {
      vs >> config.dt;
    } else if (key == "mass") {
      vs >> config.mass;
    } else if (key == "seed") {
      vs >> config.seed;
    } else if (key == "statistics") {
      if (value == "bosonic") {
        config.statistics = Statistics::bosonic;
      } else if (value == "fermionic") {
        config.statistics = Statistics::fermionic;
      } else {
        throw std::invalid_argument("config: unknown statistics " + value);
      }
    } else if (key == "source") {
      int t = 0;
      int x = 0;
      double v = 0.0;
      vs >> t >> x >> v;
      if (vs.fail()) {
        throw std::invalid_argument("config: bad source triple on line " +
                                    std::to_string(line_no));
      }
      config.sources.emplace_back(t, x, v);
    } else if (key == "window") {
      vs >> config.window_begin >> config.window_end;
      if (vs.fail()) {
        throw std::invalid_argument("config: bad window on line " +
                                    std::to_string(line_no));
      }
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "n_max") {
      vs >> config.n_max;
    } else if (key == "samples") {
      vs >> config.samples;
    } else if (key == "check_demo") {
      config.check_demo = parse_switch(value, key);
    } else if (key == "check_moments") {
      config.check_moments = parse_switch(value, key);
    } else if (key == "check_causality") {
      config.check_causality = parse_switch(value, key);
    } else if (key == "check_timeslice") {
      config.check_timeslice = parse_switch(value, key);
    } else {
      throw std::invalid_argument("config: unknown key " + key);
    }
    if (vs.fail()) {
      throw std::invalid_argument("config: bad value for " + key);
    }
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

LatticeSpacetime make_lattice(const RunConfig& config) {
  return LatticeSpacetime(config.n_x, config.n_t, config.dx, config.dt,
                          config.mass);
}

Section make_source(const RunConfig& config, const LatticeSpacetime& lat) {
  Section j(lat);
  for (const auto& [t, x, v] : config.sources) {
    if (t < lat.support_min_slice() || t > lat.support_max_slice() || x < 0 ||
        x >= lat.n_x()) {
      throw std::invalid_argument(
          "config: source entry violates the support margin");
    }
    j.at(t, x) += v;
  }
  return j;
}

}  // namespace aqft
