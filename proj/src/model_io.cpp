// Text round trip for trained models. Reals use 17 significant digits so the
// exact double comes back on any platform.
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "newstrend/models.hpp"

namespace newstrend {

namespace {

constexpr const char* kMagic = "newstrend-model";
constexpr int kVersion = 1;

void write_real(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

void write_reals(std::ostream& out, const char* name, const std::vector<double>& values) {
  out << name << ' ' << values.size();
  for (double v : values) {
    out << ' ';
    write_real(out, v);
  }
  out << '\n';
}

void write_ints(std::ostream& out, const char* name, const std::vector<long long>& values) {
  out << name << ' ' << values.size();
  for (long long v : values) out << ' ' << v;
  out << '\n';
}

void write_scalar(std::ostream& out, const char* name, double v) {
  out << name << " 1 ";
  write_real(out, v);
  out << '\n';
}

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw std::runtime_error("model format: unexpected end of input");
    return w;
  }

  void expect(const std::string& token) {
    const std::string got = word();
    if (got != token) {
      throw std::runtime_error("model format: expected '" + token + "', got '" + got + "'");
    }
  }

  long long integer() {
    const std::string w = word();
    try {
      return std::stoll(w);
    } catch (const std::exception&) {
      throw std::runtime_error("model format: expected integer, got '" + w + "'");
    }
  }

  double real() {
    const std::string w = word();
    try {
      return std::stod(w);
    } catch (const std::exception&) {
      throw std::runtime_error("model format: expected real, got '" + w + "'");
    }
  }

  std::vector<double> reals(const std::string& name) {
    expect(name);
    const long long count = integer();
    std::vector<double> values(static_cast<std::size_t>(count));
    for (auto& v : values) v = real();
    return values;
  }

  std::vector<long long> ints(const std::string& name) {
    expect(name);
    const long long count = integer();
    std::vector<long long> values(static_cast<std::size_t>(count));
    for (auto& v : values) v = integer();
    return values;
  }

  double scalar(const std::string& name) {
    expect(name);
    expect("1");
    return real();
  }

 private:
  std::istringstream in_;
};

void write_tree(std::ostream& out, const DtreeModel& tree) {
  const std::size_t m = tree.nodes.size();
  std::vector<long long> feature(m), left(m), right(m), label(m);
  std::vector<double> threshold(m), fraction(m);
  for (std::size_t i = 0; i < m; ++i) {
    const TreeNode& n = tree.nodes[i];
    feature[i] = n.feature;
    left[i] = n.left;
    right[i] = n.right;
    label[i] = n.label;
    threshold[i] = n.threshold;
    fraction[i] = n.fraction;
  }
  write_ints(out, "feature", feature);
  write_reals(out, "threshold", threshold);
  write_ints(out, "left", left);
  write_ints(out, "right", right);
  write_ints(out, "label", label);
  write_reals(out, "fraction", fraction);
}

DtreeModel read_tree(Reader& r) {
  const auto feature = r.ints("feature");
  const auto threshold = r.reals("threshold");
  const auto left = r.ints("left");
  const auto right = r.ints("right");
  const auto label = r.ints("label");
  const auto fraction = r.reals("fraction");
  const std::size_t m = feature.size();
  if (threshold.size() != m || left.size() != m || right.size() != m || label.size() != m ||
      fraction.size() != m) {
    throw std::runtime_error("model format: tree array size mismatch");
  }
  DtreeModel tree;
  tree.nodes.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    tree.nodes[i] = TreeNode{static_cast<int>(feature[i]), threshold[i], static_cast<int>(left[i]),
                             static_cast<int>(right[i]),   static_cast<int>(label[i]),
                             fraction[i]};
  }
  return tree;
}

}  // namespace

std::string serialize_model(const Model& model) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(model.kind) << '\n';
  out << "feature_dim " << model.feature_dim << '\n';

  switch (model.kind) {
    case ModelKind::logreg: {
      const auto& m = std::get<LogregModel>(model.params);
      write_reals(out, "weights", m.weights);
      write_scalar(out, "bias", m.bias);
      break;
    }
    case ModelKind::svm: {
      const auto& m = std::get<SvmModel>(model.params);
      write_reals(out, "weights", m.weights);
      write_scalar(out, "bias", m.bias);
      break;
    }
    case ModelKind::lda: {
      const auto& m = std::get<LdaModel>(model.params);
      write_reals(out, "log_prior", {m.log_prior[0], m.log_prior[1]});
      write_reals(out, "mean0", m.mean0);
      write_reals(out, "mean1", m.mean1);
      write_reals(out, "pooled_var", m.pooled_var);
      break;
    }
    case ModelKind::gnb: {
      const auto& m = std::get<GnbModel>(model.params);
      write_reals(out, "log_prior", {m.log_prior[0], m.log_prior[1]});
      write_reals(out, "mean0", m.mean0);
      write_reals(out, "var0", m.var0);
      write_reals(out, "mean1", m.mean1);
      write_reals(out, "var1", m.var1);
      break;
    }
    case ModelKind::knn: {
      const auto& m = std::get<KnnModel>(model.params);
      out << "k 1 " << m.k << '\n';
      out << "rows 1 " << m.X.size() << '\n';
      std::vector<long long> labels(m.y.begin(), m.y.end());
      write_ints(out, "labels", labels);
      std::vector<double> flat;
      flat.reserve(m.X.size() * model.feature_dim);
      for (const auto& row : m.X) flat.insert(flat.end(), row.begin(), row.end());
      write_reals(out, "X", flat);
      break;
    }
    case ModelKind::dtree:
      write_tree(out, std::get<DtreeModel>(model.params));
      break;
    case ModelKind::rforest: {
      const auto& m = std::get<RforestModel>(model.params);
      out << "trees 1 " << m.trees.size() << '\n';
      for (const auto& tree : m.trees) write_tree(out, tree);
      break;
    }
    case ModelKind::mlp: {
      const auto& m = std::get<MlpModel>(model.params);
      out << "hidden 1 " << m.hidden << '\n';
      write_reals(out, "w1", m.w1);
      write_reals(out, "b1", m.b1);
      write_reals(out, "w2", m.w2);
      write_scalar(out, "b2", m.b2);
      break;
    }
  }
  out << "end\n";
  return out.str();
}

Model deserialize_model(const std::string& text) {
  Reader r(text);
  r.expect(kMagic);
  if (r.integer() != kVersion) throw std::runtime_error("model format: unsupported version");
  r.expect("kind");
  const auto kind = model_kind_from_string(r.word());
  if (!kind) throw std::runtime_error("model format: unknown kind");
  r.expect("feature_dim");
  const auto feature_dim = static_cast<std::size_t>(r.integer());

  Model model;
  model.kind = *kind;
  model.feature_dim = feature_dim;

  switch (*kind) {
    case ModelKind::logreg: {
      LogregModel m;
      m.weights = r.reals("weights");
      m.bias = r.scalar("bias");
      model.params = std::move(m);
      break;
    }
    case ModelKind::svm: {
      SvmModel m;
      m.weights = r.reals("weights");
      m.bias = r.scalar("bias");
      model.params = std::move(m);
      break;
    }
    case ModelKind::lda: {
      LdaModel m;
      const auto prior = r.reals("log_prior");
      if (prior.size() != 2) throw std::runtime_error("model format: bad log_prior");
      m.log_prior = {prior[0], prior[1]};
      m.mean0 = r.reals("mean0");
      m.mean1 = r.reals("mean1");
      m.pooled_var = r.reals("pooled_var");
      model.params = std::move(m);
      break;
    }
    case ModelKind::gnb: {
      GnbModel m;
      const auto prior = r.reals("log_prior");
      if (prior.size() != 2) throw std::runtime_error("model format: bad log_prior");
      m.log_prior = {prior[0], prior[1]};
      m.mean0 = r.reals("mean0");
      m.var0 = r.reals("var0");
      m.mean1 = r.reals("mean1");
      m.var1 = r.reals("var1");
      model.params = std::move(m);
      break;
    }
    case ModelKind::knn: {
      KnnModel m;
      r.expect("k");
      r.expect("1");
      m.k = static_cast<int>(r.integer());
      r.expect("rows");
      r.expect("1");
      const auto rows = static_cast<std::size_t>(r.integer());
      const auto labels = r.ints("labels");
      m.y.assign(labels.begin(), labels.end());
      const auto flat = r.reals("X");
      if (labels.size() != rows || flat.size() != rows * feature_dim) {
        throw std::runtime_error("model format: knn array size mismatch");
      }
      m.X.resize(rows);
      for (std::size_t i = 0; i < rows; ++i) {
        m.X[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * feature_dim),
                      flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * feature_dim));
      }
      model.params = std::move(m);
      break;
    }
    case ModelKind::dtree:
      model.params = read_tree(r);
      break;
    case ModelKind::rforest: {
      RforestModel m;
      r.expect("trees");
      r.expect("1");
      const auto n_trees = static_cast<std::size_t>(r.integer());
      m.trees.reserve(n_trees);
      for (std::size_t t = 0; t < n_trees; ++t) m.trees.push_back(read_tree(r));
      model.params = std::move(m);
      break;
    }
    case ModelKind::mlp: {
      MlpModel m;
      r.expect("hidden");
      r.expect("1");
      m.hidden = static_cast<std::size_t>(r.integer());
      m.input_dim = feature_dim;
      m.w1 = r.reals("w1");
      m.b1 = r.reals("b1");
      m.w2 = r.reals("w2");
      m.b2 = r.scalar("b2");
      if (m.w1.size() != m.hidden * m.input_dim || m.b1.size() != m.hidden ||
          m.w2.size() != m.hidden) {
        throw std::runtime_error("model format: mlp array size mismatch");
      }
      model.params = std::move(m);
      break;
    }
  }
  r.expect("end");
  return model;
}

}  // namespace newstrend
