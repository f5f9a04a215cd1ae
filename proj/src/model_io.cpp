#include "bellsim/model_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bellsim {

LhvModel parse_model(std::istream& in) {
  LhvModel model;
  std::array<bool, 256> seen{};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream fields(line);
    std::string a0, a1, b0, b1;
    double weight = 0.0;
    if (!(fields >> a0 >> a1 >> b0 >> b1 >> weight)) {
      throw std::invalid_argument("model line " + std::to_string(line_no) +
                                  ": want '<a0> <a1> <b0> <b1> <weight>'");
    }
    std::string extra;
    if (fields >> extra) {
      throw std::invalid_argument("model line " + std::to_string(line_no) +
                                  ": trailing content '" + extra + "'");
    }

    InstructionSet set;
    try {
      set.a0 = LocalInstruction::parse(a0);
      set.a1 = LocalInstruction::parse(a1);
      set.b0 = LocalInstruction::parse(b0);
      set.b1 = LocalInstruction::parse(b1);
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("model line " + std::to_string(line_no) + ": " + err.what());
    }
    if (!(weight >= 0.0)) {
      throw std::invalid_argument("model line " + std::to_string(line_no) +
                                  ": weight must be non-negative");
    }
    if (seen[set.index()]) {
      throw std::invalid_argument("model line " + std::to_string(line_no) +
                                  ": duplicate strategy '" + set.to_string() + "'");
    }
    seen[set.index()] = true;
    model.weights[set.index()] = weight;
  }
  model.validate();
  return model;
}

LhvModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open model file '" + path + "'");
  }
  return parse_model(in);
}

void write_model(std::ostream& out, const LhvModel& model) {
  out << "# strategy mixture: <a0> <a1> <b0> <b1> <weight>\n";
  char buffer[64];
  for (int i = 0; i < 256; ++i) {
    if (model.weights[i] == 0.0) {
      continue;
    }
    std::snprintf(buffer, sizeof(buffer), "%.17g", model.weights[i]);
    out << InstructionSet::from_index(i).to_string() << ' ' << buffer << '\n';
  }
}

void save_model(const std::string& path, const LhvModel& model) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write model file '" + path + "'");
  }
  write_model(out, model);
}

} // namespace bellsim
