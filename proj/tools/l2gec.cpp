// l2gec command-line driver: build artifacts, correct text, evaluate output.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "l2gec/chains.hpp"
#include "l2gec/config.hpp"
#include "l2gec/error.hpp"
#include "l2gec/lexicon.hpp"
#include "l2gec/m2.hpp"
#include "l2gec/masked.hpp"
#include "l2gec/morph.hpp"
#include "l2gec/ngram.hpp"
#include "l2gec/phonetic.hpp"
#include "l2gec/pipeline.hpp"

#ifndef L2GEC_VERSION
#define L2GEC_VERSION "0.0.0"
#endif

namespace {

using namespace l2gec;

constexpr int kExitEnv = 2;
constexpr int kExitInput = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw IoError("error writing " + path);
}

struct Options {
  std::string config_file;
  std::vector<std::string> overrides;  // key=value

  // build
  std::string corpus, out, bigrams_out, counts_out, morph_path, tag_freq_path;
  bool paragraphs = false;

  // correct
  std::string input = "-", output = "-", log_path;
  std::optional<std::string> stages, masked_endpoint, lm_path, dict_path, chains_path;
  std::optional<int> beam, max_d, workers;

  // evaluate
  std::string m2_path, hyp_path;
  std::optional<double> beta;
  bool json = false;
};

config::GlobalConfig load_config(const Options& o) {
  config::GlobalConfig cfg;
  if (!o.config_file.empty()) cfg.load_file(o.config_file);
  cfg.load_env();
  for (const auto& kv : o.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw config::ConfigError("--set expects key=value, got '" + kv + "'", 0);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.stages) cfg.set("stages", *o.stages);
  if (o.beam) cfg.set("beam_width", std::to_string(*o.beam));
  if (o.max_d) cfg.set("spell.max_d", std::to_string(*o.max_d));
  if (o.workers) cfg.set("workers", std::to_string(*o.workers));
  if (o.masked_endpoint) cfg.set("masked.endpoint", *o.masked_endpoint);
  if (o.lm_path) cfg.set("path.lm", *o.lm_path);
  if (o.dict_path) cfg.set("path.dict", *o.dict_path);
  if (o.chains_path) cfg.set("path.chains", *o.chains_path);
  if (!o.morph_path.empty()) cfg.set("path.morph", o.morph_path);
  if (!o.tag_freq_path.empty()) cfg.set("path.tag_freq", o.tag_freq_path);
  if (o.beta) {
    std::ostringstream b;
    b << *o.beta;
    cfg.set("eval.beta", b.str());
  }
  return cfg;
}

text::CorpusReader corpus_reader(const Options& o) {
  return text::CorpusReader(o.corpus, o.paragraphs ? text::LineMode::paragraph : text::LineMode::sentence);
}

morph::MorphLexicon load_morph(const config::GlobalConfig& cfg) {
  auto m = morph::MorphLexicon::load(cfg.get("path.morph"));
  if (!cfg.get("path.tag_freq").empty()) {
    auto in = open_in(cfg.get("path.tag_freq"));
    m.read_tag_frequencies(in);
  }
  return m;
}

int cmd_build_dict(const Options& o) {
  auto cfg = load_config(o);
  lex::LexiconBuildOptions opts;
  opts.min_count = static_cast<std::uint64_t>(std::max(1, cfg.get_int("lexicon.min_count")));
  opts.tokenizer.fold_yo = cfg.get_bool("text.fold_yo");
  auto lexicon = lex::build_lexicon(corpus_reader(o), opts);
  if (lexicon.size() == 0) throw EmptyCorpus();
  auto out = open_out(o.out);
  lexicon.write_tsv(out);
  close_out(out, o.out);
  if (!o.bigrams_out.empty()) {
    auto bo = open_out(o.bigrams_out);
    lexicon.write_bigrams_tsv(bo);
    close_out(bo, o.bigrams_out);
  }
  std::cerr << "words: " << lexicon.size() << ", bigrams: " << lexicon.bigram_size() << '\n';
  return 0;
}

int cmd_build_lm(const Options& o) {
  auto cfg = load_config(o);
  text::TokenizerOptions topts;
  topts.fold_yo = cfg.get_bool("text.fold_yo");
  auto counts = lm::count_ngrams(corpus_reader(o), topts);
  lm::KnOptions kn;
  kn.unk_logprob = cfg.get_double("lm.unk_logprob");
  auto model = lm::estimate_kn(counts, kn);
  auto out = open_out(o.out);
  model.export_arpa(out);
  close_out(out, o.out);
  if (!o.counts_out.empty()) {
    auto co = open_out(o.counts_out);
    counts.write_tsv(co);
    close_out(co, o.counts_out);
  }
  std::cerr << "sentences: " << counts.sentences() << ", 1-grams: " << model.ngram_count(1)
            << ", 2-grams: " << model.ngram_count(2) << ", 3-grams: " << model.ngram_count(3) << '\n';
  return 0;
}

int cmd_build_chains(const Options& o) {
  auto cfg = load_config(o);
  if (cfg.get("path.morph").empty()) throw MissingArtifact("chains", "a morphology lexicon (--morph)");
  auto morph = load_morph(cfg);
  text::TokenizerOptions topts;
  topts.fold_yo = cfg.get_bool("text.fold_yo");
  auto reader = corpus_reader(o);
  bool any = false;
  reader.for_each([&](std::string_view) { any = true; });
  if (!any) throw EmptyCorpus();
  auto store = chains::build_store(reader, morph, topts);
  auto out = open_out(o.out);
  store.write_tsv(out);
  close_out(out, o.out);
  std::cerr << "chains: " << store.size() << '\n';
  return 0;
}

int cmd_correct(const Options& o) {
  auto cfg = load_config(o);
  auto pc = cfg.pipeline_config();

  std::optional<lm::NGramModel> model;
  std::optional<lex::LexiconIndex> lexicon;
  std::optional<phon::PhoneticIndex> phonetic;
  std::optional<morph::MorphLexicon> morph;
  std::optional<chains::ChainStore> store;
  std::unique_ptr<masked::MaskedPredictor> remote;

  if (!cfg.get("path.lm").empty()) {
    auto in = open_in(cfg.get("path.lm"));
    lm::KnOptions kn;
    kn.unk_logprob = cfg.get_double("lm.unk_logprob");
    model = lm::NGramModel::import_arpa(in, kn);
  }
  if (!cfg.get("path.dict").empty()) {
    auto in = open_in(cfg.get("path.dict"));
    auto freq = lex::FrequencyLexicon::read_tsv(in);
    phonetic = phon::PhoneticIndex::build(freq, std::max(1, pc.code_d));
    lexicon.emplace(std::move(freq), std::max({1, pc.short_d, pc.max_d}));
  }
  if (!cfg.get("path.morph").empty()) morph = load_morph(cfg);
  if (!cfg.get("path.chains").empty()) {
    auto in = open_in(cfg.get("path.chains"));
    store = chains::ChainStore::read_tsv(in);
  }
  if (!cfg.get("masked.endpoint").empty())
    remote = masked::remote_predictor(cfg.get("masked.endpoint"),
                                      std::chrono::milliseconds(cfg.get_int("masked.timeout_ms")));

  pipeline::Artifacts art;
  art.model = model ? &*model : nullptr;
  art.lexicon = lexicon ? &*lexicon : nullptr;
  art.phonetic = phonetic ? &*phonetic : nullptr;
  art.morph = morph ? &*morph : nullptr;
  art.chains = store ? &*store : nullptr;
  art.predictor = remote.get();
  pipeline::Pipeline pipe(pc, art);

  std::ifstream fin;
  std::istream* in = &std::cin;
  if (o.input != "-") {
    fin = open_in(o.input);
    in = &fin;
  }
  std::ofstream fout;
  std::ostream* out = &std::cout;
  if (o.output != "-") {
    fout = open_out(o.output);
    out = &fout;
  }
  std::ofstream flog;
  if (!o.log_path.empty()) flog = open_out(o.log_path);

  auto stats = pipeline::correct_stream(pipe, *in, *out, o.log_path.empty() ? nullptr : &flog);
  if (!o.log_path.empty()) close_out(flog, o.log_path);
  if (o.output != "-") close_out(fout, o.output);

  std::cerr << "lines: " << stats.lines << ", changed: " << stats.changed_lines;
  for (std::size_t i = 0; i < pipeline::kStageCount; ++i)
    std::cerr << ", " << pipeline::to_string(static_cast<pipeline::Stage>(i)) << ": " << stats.changes[i];
  std::cerr << '\n';
  return 0;
}

int cmd_evaluate(const Options& o) {
  auto cfg = load_config(o);
  auto gold = m2::parse_m2_file(o.m2_path);
  auto in = open_in(o.hyp_path);
  std::vector<std::vector<std::string>> hyps;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    hyps.push_back(m2::split_tokens(line));
  }
  auto report = m2::score(gold, hyps, cfg.get_double("eval.beta"), cfg.get_int("eval.merge_window"));
  if (o.json) {
    m2::write_json(std::cout, report);
  } else {
    m2::write_table(std::cout, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule- and language-model-based grammatical error correction for learner Russian", "l2gec"};
  app.set_version_flag("--version", std::string("l2gec ") + L2GEC_VERSION);
  app.require_subcommand(1);

  Options o;
  app.add_option("--config", o.config_file, "flat key = value config file")->check(CLI::ExistingFile);
  app.add_option("--set", o.overrides, "override a config key (key=value), repeatable");

  auto* build = app.add_subcommand("build", "build a dictionary, language model or chain store from a corpus");
  build->require_subcommand(1);
  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "UTF-8 corpus, one sentence per line")->required();
    sub->add_option("--out", o.out, "output path")->required();
    sub->add_flag("--paragraphs", o.paragraphs, "corpus lines are paragraphs; split them into sentences");
  };
  auto* bdict = build->add_subcommand("dict", "word frequency TSV");
  add_corpus(bdict);
  bdict->add_option("--bigrams-out", o.bigrams_out, "also write bigram counts");
  auto* blm = build->add_subcommand("lm", "interpolated Kneser-Ney trigram model in ARPA format");
  add_corpus(blm);
  blm->add_option("--counts-out", o.counts_out, "also write raw n-gram counts");
  auto* bchains = build->add_subcommand("chains", "syntactic chain store TSV");
  add_corpus(bchains);
  bchains->add_option("--morph", o.morph_path, "morphology lexicon TSV");
  bchains->add_option("--tag-freq", o.tag_freq_path, "form/POS frequency TSV");

  auto* correct = app.add_subcommand("correct", "correct text line by line");
  correct->add_option("--input,-i", o.input, "input file, '-' for stdin");
  correct->add_option("--output,-o", o.output, "output file, '-' for stdout");
  correct->add_option("--stages", o.stages, "comma separated: spell,comma,o_ob,masked_prep,agreement");
  correct->add_option("--beam", o.beam, "beam width")->check(CLI::PositiveNumber);
  correct->add_option("--max-edit-distance", o.max_d, "edit distance for long words")->check(CLI::Range(0, 3));
  correct->add_option("--masked-endpoint", o.masked_endpoint, "remote masked predictor URL");
  correct->add_option("--log", o.log_path, "JSON-lines change log");
  correct->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  correct->add_option("--lm", o.lm_path, "ARPA language model");
  correct->add_option("--dict", o.dict_path, "word frequency TSV");
  correct->add_option("--morph", o.morph_path, "morphology lexicon TSV");
  correct->add_option("--tag-freq", o.tag_freq_path, "form/POS frequency TSV");
  correct->add_option("--chains", o.chains_path, "chain store TSV");

  auto* evaluate = app.add_subcommand("evaluate", "MaxMatch precision, recall and F-measure");
  evaluate->add_option("m2", o.m2_path, "gold M2 file")->required();
  evaluate->add_option("hyp", o.hyp_path, "system output, one tokenized sentence per line")->required();
  evaluate->add_option("--beta", o.beta, "F-measure beta");
  evaluate->add_flag("--json", o.json, "print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*bdict) return cmd_build_dict(o);
    if (*blm) return cmd_build_lm(o);
    if (*bchains) return cmd_build_chains(o);
    if (*correct) return cmd_correct(o);
    if (*evaluate) return cmd_evaluate(o);
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnv;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnv;
  } catch (const masked::PredictorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnv;
  } catch (const Error& e) {
    // Parse errors, empty or degenerate corpora, length mismatches.
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnv;
  }
  return 0;
}
