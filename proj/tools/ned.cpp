// Command line front end for the event detection library. Subcommands
// cover the full pipeline (detect), its intermediate products (series,
// graph-export, phrases) and scoring against labeled topics (eval).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ned/config.hpp"
#include "ned/evaluate.hpp"
#include "ned/pipeline.hpp"

namespace {

ned::CorpusFormat parse_format(const std::string& s) {
  if (s == "jsonl") return ned::CorpusFormat::json_lines;
  if (s == "csv") return ned::CorpusFormat::csv;
  throw ned::Error(ned::Errc::invalid_argument,
                   "unknown corpus format: " + s);
}

ned::PipelineConfig config_or_default(const std::string& path) {
  if (path.empty()) return ned::PipelineConfig{};
  return ned::load_config(path);
}

void write_file(const std::filesystem::path& path,
                const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ned::Error(ned::Errc::file_unreadable,
                     "cannot write: " + path.string());
  }
  out << content;
}

std::string safe_filename(const std::string& name) {
  std::string out;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '-' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? std::string("_") : out;
}

struct CorpusArgs {
  std::string input;
  std::string format = "jsonl";
  std::string config;
};

void add_corpus_args(CLI::App* cmd, CorpusArgs& args) {
  cmd->add_option("--input", args.input, "corpus file")->required();
  cmd->add_option("--format", args.format, "corpus format: jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--config", args.config, "pipeline configuration file");
}

ned::DetectionResult detect(const CorpusArgs& args,
                            const ned::PipelineConfig& cfg) {
  ned::Corpus corpus =
      ned::parse_corpus(args.input, parse_format(args.format));
  ned::PipelineResources res = ned::load_resources(cfg);
  return ned::run_detection(std::move(corpus), cfg, res);
}

int run(int argc, char** argv) {
  CLI::App app{"entity burst event detection over timestamped documents"};
  app.require_subcommand(1);

  CorpusArgs detect_args;
  std::string detect_out;
  CLI::App* cmd_detect =
      app.add_subcommand("detect", "run the pipeline and write summaries");
  add_corpus_args(cmd_detect, detect_args);
  cmd_detect->add_option("--out", detect_out, "output directory")->required();

  CorpusArgs series_args;
  std::string series_out;
  std::string series_filter;
  std::vector<std::string> series_entities;
  CLI::App* cmd_series = app.add_subcommand(
      "series", "export weighted degree series as CSV, one file per entity");
  add_corpus_args(cmd_series, series_args);
  cmd_series->add_option("--out", series_out, "output directory")->required();
  cmd_series->add_option("--filter", series_filter,
                         "only entities containing this substring");
  cmd_series->add_option("--entity", series_entities,
                         "entity key to export, repeatable");

  CorpusArgs graph_args;
  std::string graph_out;
  int graph_block = -1;
  CLI::App* cmd_graph = app.add_subcommand(
      "graph-export", "write per block co-occurrence graphs");
  add_corpus_args(cmd_graph, graph_args);
  cmd_graph->add_option("--out", graph_out, "output directory")->required();
  cmd_graph->add_option("--block", graph_block,
                        "block index, defaults to every block");

  CorpusArgs phrase_args;
  int phrase_block = -1;
  bool phrase_filtered = false;
  CLI::App* cmd_phrases = app.add_subcommand(
      "phrases", "mine frequent phrases and print support<TAB>phrase");
  add_corpus_args(cmd_phrases, phrase_args);
  cmd_phrases->add_option("--block", phrase_block,
                          "restrict to one block, defaults to whole corpus");
  cmd_phrases->add_flag("--filtered", phrase_filtered,
                        "restrict to documents kept by peak filtering");

  std::string eval_summaries;
  std::string eval_gt;
  std::string eval_mode = "article-days";
  int eval_top_n = 2;
  bool eval_exact = false;
  std::string eval_out;
  CLI::App* cmd_eval =
      app.add_subcommand("eval", "score detections against labeled topics");
  cmd_eval->add_option("--summaries", eval_summaries, "summaries JSON file")
      ->required();
  cmd_eval->add_option("--gt", eval_gt, "labeled topics, one JSON per line")
      ->required();
  cmd_eval
      ->add_option("--mode", eval_mode,
                   "tweet-slots (top n per slot) or article-days (all)")
      ->check(CLI::IsMember({"tweet-slots", "article-days"}));
  cmd_eval->add_option("--top-n", eval_top_n,
                       "events per slot considered in tweet-slots mode");
  cmd_eval->add_flag("--exact", eval_exact,
                     "match full terms only, no word expansion");
  cmd_eval->add_option("--out", eval_out, "also write the text report here");
  std::string eval_json;
  cmd_eval->add_option("--json", eval_json, "write the report as JSON here");

  CLI11_PARSE(app, argc, argv);

  if (cmd_detect->parsed()) {
    ned::PipelineConfig cfg = config_or_default(detect_args.config);
    ned::DetectionResult result = detect(detect_args, cfg);
    std::filesystem::path dir(detect_out);
    std::filesystem::create_directories(dir);
    write_file(dir / "summaries.json",
               ned::summaries_json(result).dump(2) + "\n");
    write_file(dir / "manifest.json",
               ned::manifest_json(cfg, result).dump(2) + "\n");
    std::string report = ned::render_detection_report(result);
    write_file(dir / "report.txt", report);
    std::cout << report;
    return 0;
  }

  if (cmd_series->parsed()) {
    ned::PipelineConfig cfg = config_or_default(series_args.config);
    ned::Corpus corpus =
        ned::parse_corpus(series_args.input, parse_format(series_args.format));
    ned::PipelineResources res = ned::load_resources(cfg);
    ned::DetectionResult result =
        ned::run_detection(std::move(corpus), cfg, res);
    std::filesystem::path dir(series_out);
    std::filesystem::create_directories(dir);

    std::vector<std::string> wanted;
    if (!series_entities.empty()) {
      for (const std::string& e : series_entities) {
        if (result.series.count(e)) {
          wanted.push_back(e);
        } else {
          std::cerr << "warning: no such entity: " << e << "\n";
        }
      }
    } else {
      for (const auto& [entity, s] : result.series) {
        (void)s;
        if (series_filter.empty() ||
            entity.find(series_filter) != std::string::npos) {
          wanted.push_back(entity);
        }
      }
      if (wanted.empty() && !series_filter.empty()) {
        std::cerr << "warning: no entity matches filter: " << series_filter
                  << "\n";
      }
    }
    for (const std::string& entity : wanted) {
      write_file(dir / (safe_filename(entity) + ".csv"),
                 ned::series_csv(result.series.at(entity), cfg.peaks));
    }
    std::cout << wanted.size() << " series written to " << dir.string()
              << "\n";
    return 0;
  }

  if (cmd_graph->parsed()) {
    ned::PipelineConfig cfg = config_or_default(graph_args.config);
    ned::DetectionResult result = detect(graph_args, cfg);
    std::filesystem::path dir(graph_out);
    std::filesystem::create_directories(dir);
    std::size_t written = 0;
    for (const ned::TermGraph& g : result.entity_graphs) {
      if (graph_block >= 0 &&
          g.block_index != static_cast<std::size_t>(graph_block)) {
        continue;
      }
      std::string stem = "block_" + std::to_string(g.block_index);
      write_file(dir / (stem + ".graphml"), ned::to_graphml(g));
      write_file(dir / (stem + ".edges.json"),
                 ned::to_edge_list_json(g).dump(2) + "\n");
      ++written;
    }
    if (graph_block >= 0 && written == 0) {
      throw ned::Error(ned::Errc::invalid_argument,
                       "no such block: " + std::to_string(graph_block));
    }
    std::cout << written << " graphs written to " << dir.string() << "\n";
    return 0;
  }

  if (cmd_phrases->parsed()) {
    ned::PipelineConfig cfg = config_or_default(phrase_args.config);
    ned::Corpus corpus =
        ned::parse_corpus(phrase_args.input, parse_format(phrase_args.format));
    ned::PipelineResources res = ned::load_resources(cfg);

    std::vector<std::string> texts;
    if (phrase_block < 0 && !phrase_filtered) {
      for (const ned::Document& d : corpus.documents) texts.push_back(d.text);
    } else {
      ned::DetectionResult result =
          ned::run_detection(std::move(corpus), cfg, res);
      for (std::size_t b = 0; b < result.block_doc_texts.size(); ++b) {
        if (phrase_block >= 0 && b != static_cast<std::size_t>(phrase_block)) {
          continue;
        }
        if (phrase_filtered) {
          auto it = result.peaks_by_block.find(b);
          if (it == result.peaks_by_block.end()) continue;
          for (std::size_t i : ned::filter_document_indices(
                   result.block_doc_entities[b], it->second)) {
            texts.push_back(result.block_doc_texts[b][i]);
          }
        } else {
          for (const std::string& t : result.block_doc_texts[b]) {
            texts.push_back(t);
          }
        }
      }
    }
    for (const ned::Phrase& p :
         ned::mine_phrases(texts, cfg.phrases, res.stopwords)) {
      std::cout << p.support << "\t" << p.text() << "\n";
    }
    return 0;
  }

  if (cmd_eval->parsed()) {
    std::vector<ned::DetectedTopic> detections =
        ned::load_detections(eval_summaries);
    std::vector<ned::GroundTruthTopic> topics =
        ned::load_ground_truth(eval_gt);
    ned::EvalReport rep =
        eval_mode == "tweet-slots"
            ? ned::evaluate_tweet_slots(detections, topics, eval_top_n,
                                        eval_exact)
            : ned::evaluate_article_days(detections, topics, eval_exact);
    std::string text = ned::render_report(rep);
    if (!eval_out.empty()) write_file(eval_out, text);
    if (!eval_json.empty()) {
      write_file(eval_json, ned::report_json(rep).dump(2) + "\n");
    }
    std::cout << text;
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ned::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
