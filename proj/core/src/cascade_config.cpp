#include "leveler/cascade_config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>

#include "leveler/text.hpp"

namespace leveler {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> kAllowed = {
      {"mle", {"table", "min_prob", "min_count"}},
      {"lex", {"lexicon", "analyzer", "pos", "eps"}},
      {"dist-freq", {"bins"}},
      {"ex-freq", {"bins"}},
      {"freq", {"bins"}},
      {"default", {"level"}},
      {"external", {"preds", "label"}},
  };
  return kAllowed;
}

std::vector<std::string_view> split_layers(std::string_view expr) {
  std::vector<std::string_view> parts;
  std::size_t start = 0, depth = 0;
  static constexpr std::string_view kUnicodeArrow = "\xE2\x86\x92";
  for (std::size_t i = 0; i < expr.size();) {
    const char c = expr[i];
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    std::size_t sep = 0;
    if (depth == 0 && expr.compare(i, 2, "->") == 0) sep = 2;
    if (depth == 0 && expr.compare(i, kUnicodeArrow.size(), kUnicodeArrow) == 0)
      sep = kUnicodeArrow.size();
    if (sep) {
      parts.push_back(expr.substr(start, i - start));
      i += sep;
      start = i;
    } else {
      ++i;
    }
  }
  parts.push_back(expr.substr(start));
  return parts;
}

LayerConfig parse_layer(std::string_view text_in) {
  const auto text = trim(text_in);
  if (text.empty()) throw Error("cascade: empty layer");
  LayerConfig layer;
  std::string_view args;
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    layer.kind = lower(text);
  } else {
    if (text.back() != ')') throw Error("cascade: missing ')' in '" + std::string(text) + "'");
    layer.kind = lower(trim(text.substr(0, open)));
    args = text.substr(open + 1, text.size() - open - 2);
  }

  if (layer.kind == "l3" || layer.kind == "l4" || layer.kind == "l5" ||
      layer.kind == "default3" || layer.kind == "default4" || layer.kind == "default5") {
    layer.params["level"] = std::string(1, layer.kind.back());
    layer.kind = "default";
  } else if (layer.kind == "bert") {
    layer.kind = "external";
  }
  const auto allowed = allowed_params().find(layer.kind);
  if (allowed == allowed_params().end())
    throw Error("cascade: unknown layer '" + layer.kind + "'");

  if (!trim(args).empty()) {
    for (auto piece : text::split(args, ',')) {
      const auto eq = piece.find('=');
      if (eq == std::string_view::npos)
        throw Error("cascade: expected key=value in '" + std::string(trim(piece)) + "'");
      const auto key = lower(trim(piece.substr(0, eq)));
      const auto value = std::string(trim(piece.substr(eq + 1)));
      if (!allowed->second.count(key))
        throw Error("cascade: layer '" + layer.kind + "' has no parameter '" + key + "'");
      if (value.empty()) throw Error("cascade: empty value for '" + key + "'");
      layer.params[key] = value;
    }
  }
  return layer;
}

double prob_param(const LayerConfig& l, const std::string& key, double fallback) {
  const auto it = l.params.find(key);
  if (it == l.params.end()) return fallback;
  const auto v = text::parse_double(it->second);
  if (!v || *v < 0.0 || *v > 1.0) throw Error("cascade: " + key + " must be a number in [0, 1]");
  return *v;
}

std::string param_or(const LayerConfig& l, const std::string& key, const std::string& fallback) {
  const auto it = l.params.find(key);
  return it == l.params.end() ? fallback : it->second;
}

std::string require_path(const LayerConfig& l, const std::string& key, const std::string& fallback,
                         const std::string& flag) {
  auto p = param_or(l, key, fallback);
  if (p.empty())
    throw Error("layer '" + l.kind + "' needs a " + key + " file (pass " + flag + " or " + l.kind +
                "(" + key + "=...))");
  return p;
}

bool bool_param(const std::string& v) {
  const auto s = lower(v);
  if (s == "1" || s == "on" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "off" || s == "false" || s == "no") return false;
  throw Error("cascade: expected on/off, got '" + v + "'");
}

template <typename T, typename Load>
std::shared_ptr<const T> cached(std::map<std::string, std::shared_ptr<const T>>& cache,
                                const std::string& key, Load&& load) {
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto value = std::make_shared<const T>(load());
  cache.emplace(key, value);
  return value;
}

}  // namespace

CascadeConfig parse_cascade_expr(std::string_view expr, std::string name) {
  CascadeConfig cfg{std::move(name), {}};
  for (auto part : split_layers(expr)) cfg.layers.push_back(parse_layer(part));
  return cfg;
}

std::vector<CascadeConfig> parse_cascade_file(std::istream& in) {
  std::vector<CascadeConfig> out;
  std::set<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const auto paren = t.find('(');
    if (eq == std::string_view::npos || (paren != std::string_view::npos && paren < eq))
      throw ParseError("expected 'name = layer -> layer ...'", line_no);
    const auto name = std::string(trim(t.substr(0, eq)));
    if (name.empty()) throw ParseError("empty cascade name", line_no);
    if (!names.insert(name).second) throw ParseError("duplicate cascade '" + name + "'", line_no);
    try {
      out.push_back(parse_cascade_expr(t.substr(eq + 1), name));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

const CascadeConfig* builtin_cascade(std::string_view name) {
  static const std::vector<CascadeConfig> kBuiltins = {
      parse_cascade_expr("default(level=3)", "default3"),
      parse_cascade_expr("default(level=4)", "default4"),
      parse_cascade_expr("default(level=5)", "default5"),
  };
  for (const auto& c : kBuiltins)
    if (c.name == name) return &c;
  return nullptr;
}

std::string to_string(const CascadeConfig& cfg) {
  std::string out = cfg.name.empty() ? "" : cfg.name + " = ";
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    if (i) out += " -> ";
    out += cfg.layers[i].kind;
    if (!cfg.layers[i].params.empty()) {
      out += '(';
      bool first = true;
      for (const auto& [k, v] : cfg.layers[i].params) {
        if (!first) out += ", ";
        first = false;
        out += k + "=" + v;
      }
      out += ')';
    }
  }
  return out;
}

std::string ModelLoader::locate(const std::string& path) const {
  namespace fs = std::filesystem;
  if (paths_.data_dir.empty() || fs::path(path).is_absolute() || fs::exists(path)) return path;
  return (fs::path(paths_.data_dir) / path).string();
}

std::shared_ptr<const MleTable> ModelLoader::mle(const std::string& path) {
  const auto p = locate(path);
  return cached(mle_, p, [&] {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open MLE table " + p);
    try {
      return read_mle(in);
    } catch (const ParseError& e) {
      throw ParseError(p + ": " + e.what(), e.line());
    }
  });
}

std::shared_ptr<const Lexicon> ModelLoader::lexicon(const std::string& path, bool pos_sensitive) {
  const auto p = locate(path);
  return cached(lex_, p + (pos_sensitive ? "#pos" : "#lemma"),
                [&] { return load_lexicon_file(p, pos_sensitive); });
}

std::shared_ptr<const AnalyzerTable> ModelLoader::analyzer(const std::string& path) {
  const auto p = locate(path);
  return cached(analyzer_, p, [&] { return load_analyzer_file(p); });
}

std::shared_ptr<const BinTable> ModelLoader::bins(const std::string& path) {
  const auto p = locate(path);
  return cached(bins_, p, [&] {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open bin table " + p);
    try {
      return read_bins(in);
    } catch (const ParseError& e) {
      throw ParseError(p + ": " + e.what(), e.line());
    }
  });
}

std::shared_ptr<const PredictionMap> ModelLoader::predictions(const std::string& path) {
  const auto p = locate(path);
  return cached(preds_, p, [&] { return import_subword_predictions_file(p); });
}

CascadeSpec ModelLoader::resolve(const CascadeConfig& cfg) {
  std::vector<Layer> layers;
  for (const auto& l : cfg.layers) {
    if (l.kind == "mle") {
      MleLayer m;
      m.table = mle(require_path(l, "table", paths_.mle, "--mle"));
      m.min_prob = prob_param(l, "min_prob", 0.0);
      if (const auto it = l.params.find("min_count"); it != l.params.end()) {
        const auto v = text::parse_uint(it->second);
        if (!v) throw Error("cascade: min_count must be a non-negative integer");
        m.min_count = *v;
      }
      layers.push_back({m, {}});
    } else if (l.kind == "lex") {
      bool pos = paths_.lexicon_pos_sensitive;
      if (const auto it = l.params.find("pos"); it != l.params.end()) pos = bool_param(it->second);
      LexLayer x;
      x.lexicon = lexicon(require_path(l, "lexicon", paths_.lexicon, "--lexicon"), pos);
      x.analyzer = analyzer(require_path(l, "analyzer", paths_.analyzer, "--analyzer"));
      if (const auto it = l.params.find("eps"); it != l.params.end()) {
        const auto v = text::parse_double(it->second);
        if (!v || *v < 0.0) throw Error("cascade: eps must be a non-negative number");
        x.top_eps = *v;
      }
      layers.push_back({x, {}});
    } else if (l.kind == "dist-freq" || l.kind == "ex-freq" || l.kind == "freq") {
      const bool dist = l.kind == "dist-freq";
      const auto& fallback = l.kind == "freq" ? std::string{} : dist ? paths_.dist_freq : paths_.ex_freq;
      const auto table =
          bins(require_path(l, "bins", fallback, dist ? "--dist-freq" : "--ex-freq"));
      if (l.kind != "freq" && (table->scheme() == BinScheme::dist) != dist)
        throw Error("layer '" + l.kind + "' was given a " + to_string(table->scheme()) +
                    "-freq bin table");
      layers.push_back({FreqLayer{table}, {}});
    } else if (l.kind == "default") {
      const auto lvl = exact_level(
          static_cast<int>(text::parse_uint(param_or(l, "level", "3")).value_or(0)));
      if (!lvl) throw Error("cascade: default level must be 3, 4 or 5");
      layers.push_back({DefaultLayer{*lvl}, {}});
    } else if (l.kind == "external") {
      layers.push_back({ExternalLayer{predictions(
                            require_path(l, "preds", paths_.predictions, "--predictions"))},
                        param_or(l, "label", "")});
    } else {
      throw Error("cascade: unknown layer '" + l.kind + "'");
    }
  }
  auto spec = make_cascade(std::move(layers), cfg.name);
  spec.validate();
  return spec;
}

ModelSet ModelLoader::model_set() {
  auto need = [](const std::string& p, const char* layer, const char* flag) {
    if (p.empty())
      throw Error(std::string("missing model for layer ") + layer + " (pass " + flag + ")");
    return p;
  };
  ModelSet m;
  m.mle = mle(need(paths_.mle, "MLE", "--mle"));
  m.lexicon = lexicon(need(paths_.lexicon, "Lex", "--lexicon"), paths_.lexicon_pos_sensitive);
  m.analyzer = analyzer(need(paths_.analyzer, "Lex", "--analyzer"));
  m.dist_freq = bins(need(paths_.dist_freq, "Dist-Freq", "--dist-freq"));
  m.ex_freq = bins(need(paths_.ex_freq, "Ex-Freq", "--ex-freq"));
  m.external = predictions(need(paths_.predictions, "BERT", "--predictions"));
  if (m.dist_freq->scheme() != BinScheme::dist)
    throw Error("--dist-freq does not hold a dist-freq bin table");
  if (m.ex_freq->scheme() != BinScheme::ex)
    throw Error("--ex-freq does not hold an ex-freq bin table");
  return m;
}

}  // namespace leveler
