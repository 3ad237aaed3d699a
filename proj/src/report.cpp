// Plain-text and CSV rendering of experiment reports. Output carries no
// timestamps so reruns of the same config compare byte for byte.
#include <cstdio>
#include <sstream>

#include "newstrend/csv.hpp"
#include "newstrend/eval.hpp"

namespace newstrend {

namespace {

std::string format_accuracy(double value) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

const char* const kAlgorithmLabels[] = {"Logistic Regression",
                                        "Linear Discriminant Analysis",
                                        "K-Nearest Neighbors",
                                        "Decision Tree Classifier",
                                        "Support Vector Machine",
                                        "Random Forest",
                                        "Gaussian Naive Bayes",
                                        "MLP"};

std::string algorithm_label(const std::string& model) {
  if (const auto kind = model_kind_from_string(model)) {
    return kAlgorithmLabels[static_cast<std::size_t>(*kind)];
  }
  return model;
}

}  // namespace

std::string render_text_report(const ExperimentReport& report) {
  std::ostringstream out;
  out << "Trend prediction report\n";
  out << "=======================\n";
  out << "split:  " << report.split_description << "\n";
  out << "seed:   " << report.seed << "\n";
  out << "config: " << report.config_digest << "\n";
  out << "\n";

  std::size_t emb_width = 10;
  std::size_t alg_width = 28;
  for (const auto& row : report.rows) {
    emb_width = std::max(emb_width, row.embedding.size());
    alg_width = std::max(alg_width, algorithm_label(row.model).size());
  }

  char line[256];
  std::snprintf(line, sizeof(line), "%-*s  %-*s  %8s\n", static_cast<int>(emb_width), "Embedding",
                static_cast<int>(alg_width), "Algorithm", "Accuracy");
  out << line;
  out << std::string(emb_width + alg_width + 12, '-') << "\n";

  std::snprintf(line, sizeof(line), "%-*s  %-*s  %8s\n", static_cast<int>(emb_width), "(baseline)",
                static_cast<int>(alg_width), "Majority Class",
                format_accuracy(report.baseline_accuracy).c_str());
  out << line;

  for (const auto& row : report.rows) {
    if (row.result) {
      std::snprintf(line, sizeof(line), "%-*s  %-*s  %8s\n", static_cast<int>(emb_width),
                    row.embedding.c_str(), static_cast<int>(alg_width),
                    algorithm_label(row.model).c_str(),
                    format_accuracy(row.result->accuracy).c_str());
      out << line;
      if (!row.error.empty()) {
        out << "    note: " << row.error << "\n";
      }
    } else {
      std::snprintf(line, sizeof(line), "%-*s  %-*s  %8s\n", static_cast<int>(emb_width),
                    row.embedding.c_str(), static_cast<int>(alg_width),
                    algorithm_label(row.model).c_str(), "ERROR");
      out << line;
      out << "    error: " << row.error << "\n";
    }
  }

  out << "\n";
  out << "test days: " << report.n_test << ", train days: " << report.n_train << "\n";
  return out.str();
}

std::string render_csv_report(const ExperimentReport& report) {
  std::ostringstream out;
  out << "embedding,model,accuracy,tp,fp,tn,fn,n_test,baseline,config_digest\n";

  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", report.baseline_accuracy);
    const Confusion& c = report.baseline_confusion;
    out << "(baseline),majority," << buf << "," << c.tp << "," << c.fp << "," << c.tn << ","
        << c.fn << "," << report.n_test << "," << buf << "," << report.config_digest << "\n";
  }

  for (const auto& row : report.rows) {
    out << csv_escape(row.embedding) << "," << csv_escape(row.model) << ",";
    if (row.result) {
      char acc[64], base[64];
      std::snprintf(acc, sizeof(acc), "%.6f", row.result->accuracy);
      std::snprintf(base, sizeof(base), "%.6f", row.result->majority_baseline_accuracy);
      out << acc << "," << row.result->confusion.tp << "," << row.result->confusion.fp << ","
          << row.result->confusion.tn << "," << row.result->confusion.fn << ","
          << row.result->n_test << "," << base << "," << report.config_digest << "\n";
    } else {
      out << "error,,,,,,," << report.config_digest << "\n";
    }
  }
  return out.str();
}

std::string render_windows_table(const std::vector<WindowSplit>& windows) {
  std::ostringstream out;
  out << "window  train_start  train_end   test_start  test_end    train_days  test_days  flags\n";
  out << "------------------------------------------------------------------------------------\n";
  char line[200];
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    std::snprintf(line, sizeof(line), "%-6zu  %s   %s  %s  %s  %10zu  %9zu  %s\n", i + 1,
                  w.train_start.to_string().c_str(), w.train_end.to_string().c_str(),
                  w.test_start.to_string().c_str(), w.test_end.to_string().c_str(),
                  w.train_days.size(), w.test_days.size(), w.short_test ? "short-test" : "-");
    out << line;
  }
  return out.str();
}

}  // namespace newstrend
