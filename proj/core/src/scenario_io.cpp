#include "nlbuffer/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlbuffer/errors.hpp"

namespace nlb {

namespace {

using nlohmann::json;

const json& member(const json& obj, const char* name, const std::string& path) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ValidationError(path.empty() ? name : path + "." + name,
                          "missing required key");
  }
  return obj.at(name);
}

std::string join(const std::string& path, const char* name) {
  return path.empty() ? std::string(name) : path + "." + name;
}

double number(const json& obj, const char* name, const std::string& path) {
  const json& v = member(obj, name, path);
  if (!v.is_number()) throw ValidationError(join(path, name), "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* name, double fallback) {
  if (!obj.contains(name)) return fallback;
  const json& v = obj.at(name);
  if (!v.is_number()) throw ValidationError(name, "expected a number");
  return v.get<double>();
}

std::string text(const json& obj, const char* name, const std::string& path) {
  const json& v = member(obj, name, path);
  if (!v.is_string()) throw ValidationError(join(path, name), "expected a string");
  return v.get<std::string>();
}

VelocityFn velocity(const json& doc, const char* name) {
  const json& v = member(doc, name, "");
  return {number(v, "vmax", name), number(v, "rhomax", name)};
}

PiecewiseProfile profile(const json& doc, const char* name) {
  if (!doc.contains(name)) return {};
  const json& list = doc.at(name);
  if (!list.is_array()) throw ValidationError(name, "expected a list of [xstart, xend, value]");
  std::vector<PiecewiseProfile::Piece> pieces;
  for (const json& item : list) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number() ||
        !item[1].is_number() || !item[2].is_number()) {
      throw ValidationError(name, "expected entries [xstart, xend, value]");
    }
    pieces.push_back(
        {item[0].get<double>(), item[1].get<double>(), item[2].get<double>()});
  }
  try {
    return PiecewiseProfile(std::move(pieces));
  } catch (const Error& e) {
    throw ValidationError(name, e.what());
  }
}

double r_max_value(const json& buffer) {
  if (!buffer.contains("rmax")) return kInfinity;
  const json& v = buffer.at("rmax");
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfinity;
    throw ValidationError("buffer.rmax", "expected a number or \"inf\"");
  }
  if (!v.is_number()) throw ValidationError("buffer.rmax", "expected a number or \"inf\"");
  return v.get<double>();
}

Scenario from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  Scenario s;
  s.model = model_kind_from_string(text(doc, "model", ""));

  if (doc.contains("kernel")) {
    const json& k = doc.at("kernel");
    try {
      s.kernel.kind = kernel_kind_from_string(text(k, "kind", "kernel"));
    } catch (const InvalidKernel& e) {
      throw ValidationError("kernel.kind", e.what());
    }
    s.kernel.eta = number(k, "eta", "kernel");
  } else if (s.model == ModelKind::nonlocal) {
    throw ValidationError("kernel", "missing required key");
  }

  s.v1 = velocity(doc, "v1");
  s.v2 = velocity(doc, "v2");

  const json& b = member(doc, "buffer", "");
  s.buffer.mu = number(b, "mu", "buffer");
  s.buffer.r0 = b.contains("r0") ? number(b, "r0", "buffer") : 0.0;
  s.buffer.r_max = r_max_value(b);

  const json& g = member(doc, "grid", "");
  s.grid = {number(g, "xL", "grid"), number(g, "xR", "grid"),
            number(g, "dx", "grid")};

  s.init1 = profile(doc, "init1");
  s.init2 = profile(doc, "init2");
  s.left_boundary = number_or(doc, "left_boundary_value", 0.0);
  if (doc.contains("right_extension")) {
    s.right_extension =
        right_extension_from_string(text(doc, "right_extension", ""));
  }
  s.horizon = number(doc, "T", "");
  if (doc.contains("cfl_safety")) s.cfl_safety = number(doc, "cfl_safety", "");
  if (doc.contains("dt")) s.fixed_dt = number(doc, "dt", "");

  if (doc.contains("processors")) {
    const json& p = doc.at("processors");
    s.processors = {number(p, "v", "processors"), number(p, "mu1", "processors"),
                    number(p, "mu2", "processors")};
  } else if (s.model == ModelKind::supply_chain) {
    throw ValidationError("processors", "missing required key");
  }

  if (doc.contains("snapshots")) {
    const json& snaps = doc.at("snapshots");
    if (!snaps.is_array()) throw ValidationError("snapshots", "expected a list of times");
    for (const json& t : snaps) {
      if (!t.is_number()) throw ValidationError("snapshots", "expected numbers");
      s.outputs.snapshots.push_back(t.get<double>());
    }
  } else {
    s.outputs.snapshots = {s.horizon};
  }
  s.outputs.profile_csv = "profile";
  s.outputs.buffer_csv = "buffer.csv";
  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    if (o.contains("profile_csv")) s.outputs.profile_csv = text(o, "profile_csv", "outputs");
    if (o.contains("buffer_csv")) s.outputs.buffer_csv = text(o, "buffer_csv", "outputs");
  }

  validate(s);
  return s;
}

json profile_json(const PiecewiseProfile& p) {
  json list = json::array();
  for (const auto& piece : p.pieces()) {
    list.push_back({piece.x0, piece.x1, piece.value});
  }
  return list;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text_in) {
  json doc;
  try {
    doc = json::parse(text_in.begin(), text_in.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(doc);
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["model"] = std::string(to_string(s.model));
  doc["kernel"] = {{"kind", std::string(to_string(s.kernel.kind))},
                   {"eta", s.kernel.eta}};
  doc["v1"] = {{"vmax", s.v1.v_max}, {"rhomax", s.v1.rho_max}};
  doc["v2"] = {{"vmax", s.v2.v_max}, {"rhomax", s.v2.rho_max}};
  json buffer = {{"mu", s.buffer.mu}, {"r0", s.buffer.r0}};
  if (std::isinf(s.buffer.r_max)) {
    buffer["rmax"] = "inf";
  } else {
    buffer["rmax"] = s.buffer.r_max;
  }
  doc["buffer"] = buffer;
  doc["grid"] = {{"xL", s.grid.x_left}, {"xR", s.grid.x_right}, {"dx", s.grid.dx}};
  doc["init1"] = profile_json(s.init1);
  doc["init2"] = profile_json(s.init2);
  doc["left_boundary_value"] = s.left_boundary;
  doc["right_extension"] = std::string(to_string(s.right_extension));
  doc["T"] = s.horizon;
  if (s.cfl_safety) doc["cfl_safety"] = *s.cfl_safety;
  if (s.fixed_dt) doc["dt"] = *s.fixed_dt;
  doc["processors"] = {{"v", s.processors.v},
                       {"mu1", s.processors.mu1},
                       {"mu2", s.processors.mu2}};
  doc["snapshots"] = s.outputs.snapshots;
  doc["outputs"] = {{"profile_csv", s.outputs.profile_csv},
                    {"buffer_csv", s.outputs.buffer_csv}};
  return doc.dump(2);
}

}  // namespace nlb
