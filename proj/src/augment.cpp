#include "csaug/augment.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "csaug/bio.hpp"
#include "csaug/families.hpp"
#include "json.hpp"

namespace csaug {

namespace {

std::string join_range(std::span<const std::string> tokens, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string span_text(std::size_t start, std::size_t end) {
  return std::to_string(start) + ".." + std::to_string(end);
}

std::string describe(const std::vector<UtteranceFailure>& failures) {
  std::ostringstream os;
  os << failures.size() << " utterance(s) failed to augment";
  const std::size_t shown = std::min<std::size_t>(failures.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    os << "\n  " << failures[i].utterance_id << " copy " << failures[i].repetition << ": "
       << failures[i].message;
  }
  if (failures.size() > shown) os << "\n  ...";
  return os.str();
}

}  // namespace

std::string_view to_string(SwitchLevel level) {
  switch (level) {
    case SwitchLevel::Chunk: return "chunk";
    case SwitchLevel::Word: return "word";
    case SwitchLevel::Sentence: return "sentence";
  }
  return "chunk";
}

SwitchLevel parse_level(std::string_view name) {
  if (name == "chunk") return SwitchLevel::Chunk;
  if (name == "word") return SwitchLevel::Word;
  if (name == "sentence") return SwitchLevel::Sentence;
  throw Error(ErrorCode::ConfigurationError, "unknown code-switching level '" + std::string(name) + "'");
}

std::vector<std::string> resolve_languages(const AugmentationConfig& cfg, const TranslationProvider* provider,
                                           std::string_view source_lang) {
  std::set<std::string> pool;
  if (cfg.family) {
    pool = family_members(*cfg.family);
  } else if (!cfg.allowed_languages.empty()) {
    pool = cfg.allowed_languages;
  } else if (provider) {
    pool = provider->supported_languages();
  } else {
    throw Error(ErrorCode::ConfigurationError, "no language pool: give a family or an allowed-language set");
  }
  for (const auto& lang : cfg.excluded_languages) pool.erase(lang);
  if (pool.empty()) {
    throw Error(ErrorCode::ConfigurationError, "effective language set is empty after exclusions");
  }
  if (provider) {
    const auto supported = provider->supported_languages();
    for (const auto& lang : pool) {
      if (lang != source_lang && !supported.contains(lang)) {
        throw Error(ErrorCode::UnsupportedLanguage,
                    "language '" + lang + "' is not supported by provider " + provider->id());
      }
    }
  }
  return {pool.begin(), pool.end()};
}

SwitchPlan plan_switch(const Utterance& u, SwitchLevel level, std::span<const std::string> languages, Rng& rng) {
  if (languages.empty()) throw Error(ErrorCode::ConfigurationError, "empty language pool");
  SwitchPlan plan;
  plan.chunks = slot_chunks(u);
  auto draw = [&]() -> const std::string& { return languages[uniform_index(rng, languages.size())]; };

  const std::string* sentence_language = level == SwitchLevel::Sentence ? &draw() : nullptr;
  for (std::size_t ci = 0; ci < plan.chunks.size(); ++ci) {
    const auto& c = plan.chunks[ci];
    switch (level) {
      case SwitchLevel::Chunk:
        plan.units.push_back({ci, c.start, c.end, draw()});
        break;
      case SwitchLevel::Word:
        for (std::size_t t = c.start; t < c.end; ++t) plan.units.push_back({ci, t, t + 1, draw()});
        break;
      case SwitchLevel::Sentence:
        plan.units.push_back({ci, c.start, c.end, *sentence_language});
        break;
    }
  }
  return plan;
}

CodeSwitchedUtterance realize_switch(const Utterance& u, const SwitchPlan& plan,
                                     const TranslationProvider& provider, std::string_view source_lang,
                                     std::size_t repetition, const AlignmentStrategy& aligner) {
  CodeSwitchedUtterance out;
  out.id = u.id + "#cs" + std::to_string(repetition);
  out.source_id = u.id;
  out.repetition = repetition;
  out.intent = u.intent;

  std::size_t next_unit = 0;
  for (std::size_t ci = 0; ci < plan.chunks.size(); ++ci) {
    const auto& chunk = plan.chunks[ci];
    TranslationResult combined;
    std::string languages;
    try {
      for (; next_unit < plan.units.size() && plan.units[next_unit].chunk_index == ci; ++next_unit) {
        const auto& unit = plan.units[next_unit];
        SwitchedSegment seg;
        seg.source_span = {unit.start, unit.end};
        seg.slot_type = chunk.slot_type;
        seg.language = unit.language;
        seg.source_text = join_range(u.tokens, unit.start, unit.end);

        TranslationResult piece;
        if (unit.language == source_lang) {
          piece.text = seg.source_text;
          piece.tokens.assign(u.tokens.begin() + static_cast<std::ptrdiff_t>(unit.start),
                              u.tokens.begin() + static_cast<std::ptrdiff_t>(unit.end));
          piece.provenance = Provenance::IdentityFallback;
        } else {
          piece = translate({seg.source_text, std::string(source_lang), unit.language}, provider);
        }
        seg.provenance = piece.provenance;
        seg.text = piece.text;

        if (!combined.text.empty()) combined.text += ' ';
        combined.text += piece.text;
        combined.tokens.insert(combined.tokens.end(), piece.tokens.begin(), piece.tokens.end());
        if (languages.empty()) {
          languages = unit.language;
        } else if (languages != unit.language) {
          languages += "," + unit.language;
        }
        out.chunk_languages.push_back(unit.language);
        out.segments.push_back(std::move(seg));
      }
      auto aligned = aligner(chunk, combined, languages);
      out.tokens.insert(out.tokens.end(), aligned.tokens.begin(), aligned.tokens.end());
      out.slot_labels.insert(out.slot_labels.end(), aligned.slot_labels.begin(), aligned.slot_labels.end());
    } catch (const Error& e) {
      throw Error(e.code(), "utterance " + u.id + " chunk " + span_text(chunk.start, chunk.end) + ": " + e.what());
    }
  }
  if (auto bad = first_illegal_transition(out.slot_labels)) {
    throw Error(ErrorCode::IllegalBioTransition,
                "utterance " + u.id + ": aligned labels break BIO at token " + std::to_string(*bad));
  }
  return out;
}

CodeSwitchedUtterance code_switch_utterance(const Utterance& u, const AugmentationConfig& cfg,
                                            const TranslationProvider& provider, Rng& rng,
                                            std::string_view source_lang, std::size_t repetition) {
  const auto languages = resolve_languages(cfg, &provider, source_lang);
  const auto plan = plan_switch(u, cfg.level, languages, rng);
  return realize_switch(u, plan, provider, source_lang, repetition);
}

// ---------------------------------------------------------------------------

AugmentationError::AugmentationError(std::vector<UtteranceFailure> failures)
    : Error(ErrorCode::AugmentationFailed, describe(failures)), failures_(std::move(failures)) {}

bool AugmentationError::any_provider_failure() const {
  return std::any_of(failures_.begin(), failures_.end(),
                     [](const UtteranceFailure& f) { return is_provider_error(f.code); });
}

AugmentationOutput augment_dataset(const Dataset& ds, const AugmentationConfig& cfg,
                                   const TranslationProvider& provider, const AugmentOptions& options) {
  if (cfg.k == 0) throw Error(ErrorCode::ConfigurationError, "k must be positive");
  validate_dataset(ds);
  const auto languages = resolve_languages(cfg, &provider, ds.language);

  const std::size_t n = ds.size();
  const std::size_t tasks = n * cfg.k;
  std::vector<std::optional<CodeSwitchedUtterance>> results(tasks);
  std::vector<std::optional<UtteranceFailure>> failures(tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto work = [&] {
    while (!abort.load(std::memory_order_relaxed)) {
      const std::size_t task = next.fetch_add(1);
      if (task >= tasks) return;
      const std::size_t i = task / cfg.k;
      const std::size_t j = task % cfg.k + 1;
      const auto& u = ds.utterances[i];
      try {
        Rng rng(derive_seed(cfg.seed, i, j));
        const auto plan = plan_switch(u, cfg.level, languages, rng);
        results[task] = realize_switch(u, plan, provider, ds.language, j, options.aligner);
      } catch (const Error& e) {
        failures[task] = UtteranceFailure{u.id, j, e.code(), e.what()};
        abort = true;
      } catch (const std::exception& e) {
        failures[task] = UtteranceFailure{u.id, j, ErrorCode::AugmentationFailed, e.what()};
        abort = true;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, tasks));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::vector<UtteranceFailure> failed;
  for (auto& f : failures) {
    if (f) failed.push_back(std::move(*f));
  }
  if (!failed.empty()) throw AugmentationError(std::move(failed));

  AugmentationOutput out;
  out.dataset.language = ds.language;
  out.dataset.split = ds.split;
  out.dataset.utterances.reserve(tasks + (cfg.include_original ? n : 0));
  if (cfg.include_original) out.dataset.utterances = ds.utterances;
  out.records.reserve(tasks);
  for (auto& r : results) {
    out.dataset.utterances.push_back(r->to_utterance());
    out.records.push_back(std::move(*r));
  }
  return out;
}

std::vector<std::pair<std::string, SwitchPlan>> plan_dataset(const Dataset& ds, const AugmentationConfig& cfg,
                                                             std::span<const std::string> languages) {
  if (cfg.k == 0) throw Error(ErrorCode::ConfigurationError, "k must be positive");
  std::vector<std::pair<std::string, SwitchPlan>> plans;
  plans.reserve(ds.size() * cfg.k);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 1; j <= cfg.k; ++j) {
      Rng rng(derive_seed(cfg.seed, i, j));
      plans.emplace_back(ds.utterances[i].id + "#cs" + std::to_string(j),
                         plan_switch(ds.utterances[i], cfg.level, languages, rng));
    }
  }
  return plans;
}

std::string audit_line(const CodeSwitchedUtterance& record, SwitchLevel level) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : record.segments) {
    segments.push_back({
        {"start", s.source_span.first},
        {"end", s.source_span.second},
        {"type", s.slot_type ? nlohmann::json(*s.slot_type) : nlohmann::json(nullptr)},
        {"language", s.language},
        {"provenance", std::string(to_string(s.provenance))},
        {"source", s.source_text},
        {"text", s.text},
    });
  }
  const nlohmann::json line = {
      {"id", record.id},
      {"source_id", record.source_id},
      {"repetition", record.repetition},
      {"level", std::string(to_string(level))},
      {"intent", record.intent},
      {"segments", std::move(segments)},
  };
  return line.dump();
}

}  // namespace csaug
