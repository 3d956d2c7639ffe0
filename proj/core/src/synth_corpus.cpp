#include "specrag/synth_corpus.hpp"

#include "specrag/error.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace specrag {

namespace {

std::string topic_word(std::size_t topic, std::size_t j) {
    return "t" + std::to_string(topic) + "w" + std::to_string(j);
}

std::string capitalize(std::string word) {
    if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    return word;
}

std::string join_sentence(const std::vector<std::string>& words) {
    std::string out = capitalize(words.front());
    for (std::size_t i = 1; i < words.size(); ++i) {
        out += ' ';
        out += words[i];
    }
    out += '.';
    return out;
}

std::string filler_sentence(std::size_t topic, std::size_t vocab, std::mt19937_64& rng,
                            std::size_t n_words) {
    std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n_words; ++i) words.push_back(topic_word(topic, pick(rng)));
    return join_sentence(words);
}

} // namespace

SynthCorpus make_planted_corpus(const PlantedCorpusSpec& spec) {
    if (spec.n_docs == 0 || spec.n_questions == 0) {
        raise(ErrorCode::InvalidConfig, "corpus needs at least one document and one question");
    }
    if (spec.n_options < 2 || spec.n_options > 5) {
        raise(ErrorCode::InvalidConfig, "n_options must lie in 2..5");
    }
    if (spec.straddle_fixed_boundary && spec.fixed_size_tokens < 10) {
        raise(ErrorCode::InvalidConfig, "straddle mode needs fixed_size_tokens >= 10");
    }
    if (spec.straddle_fixed_boundary && spec.n_questions > spec.n_docs) {
        raise(ErrorCode::InvalidConfig, "straddle mode places one fact per document");
    }

    std::mt19937_64 rng(spec.seed);
    SynthCorpus corpus;
    corpus.questions.resize(spec.n_questions);

    // Facts round-robin over documents; each document owns two private topics.
    std::vector<std::vector<std::size_t>> doc_questions(spec.n_docs);
    for (std::size_t q = 0; q < spec.n_questions; ++q) {
        doc_questions[q % spec.n_docs].push_back(q);
    }

    for (std::size_t d = 0; d < spec.n_docs; ++d) {
        Document doc;
        doc.id = "doc" + std::to_string(d);
        doc.source_path = "synthetic";

        std::vector<std::string> sentences;
        for (std::size_t seg = 0; seg < 2; ++seg) {
            const std::size_t topic = 2 * d + seg;
            std::vector<std::string> segment;
            std::uniform_int_distribution<std::size_t> len(6, 8);
            for (std::size_t s = 0; s < spec.sentences_per_segment; ++s) {
                segment.push_back(filler_sentence(topic, spec.topic_vocab, rng, len(rng)));
            }
            std::size_t placed = 0;
            for (std::size_t q : doc_questions[d]) {
                if ((q / spec.n_docs) % 2 != seg) continue;
                const std::string key = "fk" + std::to_string(q) + "x";
                const std::string value = "fv" + std::to_string(q) + "x";
                std::uniform_int_distribution<std::size_t> pick(0, spec.topic_vocab - 1);
                const std::size_t base_word = pick(rng);
                const std::string w1 = topic_word(topic, base_word);
                const std::string w2 = topic_word(topic, (base_word + 3) % spec.topic_vocab);
                const std::string w3 = topic_word(topic, (base_word + 7) % spec.topic_vocab);
                // The value appears twice so the gold option outscores any
                // foreign fact pair that drifts into the retrieved contexts.
                const std::string fact = join_sentence({w1, key, w2, value, value, w3});

                auto& sq = corpus.questions[q];
                sq.gold_doc_id = doc.id;
                sq.fact_text = fact;
                sq.item.question =
                    "Which value is configured for " + key + " given " + w1 + " " + w2 + "?";
                sq.item.category = "cat" + std::to_string(q % 5);

                const std::size_t slot = std::min(1 + 2 * placed, segment.size());
                segment.insert(segment.begin() + static_cast<std::ptrdiff_t>(slot), fact);
                ++placed;
            }
            sentences.insert(sentences.end(), segment.begin(), segment.end());
        }

        if (spec.straddle_fixed_boundary && !doc_questions[d].empty()) {
            // Rebuild so the first fact's key sits two tokens before the fixed
            // cut and its value one token after it.
            const std::size_t q = doc_questions[d].front();
            const std::size_t topic = 2 * d;
            const std::string key = "fk" + std::to_string(q) + "x";
            const std::string value = "fv" + std::to_string(q) + "x";
            std::uniform_int_distribution<std::size_t> pick(0, spec.topic_vocab - 1);
            const std::size_t base_word = pick(rng);
            const std::string w1 = topic_word(topic, base_word);
            const std::string w2 = topic_word(topic, (base_word + 3) % spec.topic_vocab);
            const std::string w3 = topic_word(topic, (base_word + 7) % spec.topic_vocab);
            const std::string fact = join_sentence({w1, key, w2, value, value, w3});

            auto& sq = corpus.questions[q];
            sq.gold_doc_id = doc.id;
            sq.fact_text = fact;
            sq.item.question =
                "Which value is configured for " + key + " given " + w1 + " " + w2 + "?";
            sq.item.category = "cat" + std::to_string(q % 5);

            sentences.clear();
            // Prefix of fixed_size_tokens - 3 tokens: the 6-token fact then
            // puts the key two tokens before the cut and both value tokens
            // right after it. The topic flips immediately after the fact so
            // the value-side fixed chunk shares no query words.
            std::size_t remaining = spec.fixed_size_tokens - 3;
            while (remaining > 0) {
                const std::size_t take = std::min<std::size_t>(7, remaining);
                sentences.push_back(filler_sentence(topic, spec.topic_vocab, rng, take));
                remaining -= take;
            }
            sentences.push_back(fact);
            for (std::size_t s = 0; s < spec.sentences_per_segment; ++s) {
                sentences.push_back(filler_sentence(2 * d + 1, spec.topic_vocab, rng, 7));
            }
        }

        doc.text = sentences.front();
        for (std::size_t s = 1; s < sentences.size(); ++s) {
            doc.text += ' ';
            doc.text += sentences[s];
        }
        corpus.documents.push_back(std::move(doc));
    }

    // Options: the gold value (with its key unless value_only_options) plus
    // distractor pairs over tokens that are planted in no document, so only
    // the gold option can ever overlap a retrieved context.
    for (std::size_t q = 0; q < spec.n_questions; ++q) {
        auto& sq = corpus.questions[q];
        std::string gold_option = "fv" + std::to_string(q) + "x";
        if (!spec.value_only_options) gold_option += " fk" + std::to_string(q) + "x";

        const std::size_t gold_pos = q % spec.n_options;
        sq.item.options.clear();
        std::size_t phantom = 0;
        for (std::size_t pos = 0; pos < spec.n_options; ++pos) {
            if (pos == gold_pos) {
                sq.item.options.push_back(gold_option);
                continue;
            }
            std::string text = "fv" + std::to_string(q) + "d" + std::to_string(phantom);
            if (!spec.value_only_options) {
                text += " fk" + std::to_string(q) + "d" + std::to_string(phantom);
            }
            ++phantom;
            sq.item.options.push_back(std::move(text));
        }
        sq.item.answer_index = gold_pos;
        validate(sq.item);
    }
    return corpus;
}

SynthCorpus synth_corpus(std::uint64_t seed, std::size_t n_docs, std::size_t n_questions) {
    PlantedCorpusSpec spec;
    spec.seed = seed;
    spec.n_docs = n_docs;
    spec.n_questions = n_questions;
    return make_planted_corpus(spec);
}

RerankStressCorpus make_rerank_stress_corpus(const RerankStressSpec& spec) {
    if (spec.n_questions == 0 || spec.decoys_per_question == 0) {
        raise(ErrorCode::InvalidConfig, "stress corpus needs questions and decoys");
    }
    if (spec.n_options < 2 || spec.n_options > 5) {
        raise(ErrorCode::InvalidConfig, "n_options must lie in 2..5");
    }

    std::mt19937_64 rng(spec.seed);
    RerankStressCorpus corpus;
    corpus.questions.resize(spec.n_questions);

    auto push_chunk = [&corpus](std::string text) {
        Chunk c;
        c.doc_id = "stress";
        c.chunk_id = "stress#" + std::to_string(corpus.chunks.size());
        c.text = std::move(text);
        c.range_start = 0;
        c.range_end = 0;
        corpus.chunks.push_back(std::move(c));
        return corpus.chunks.back().chunk_id;
    };

    for (std::size_t q = 0; q < spec.n_questions; ++q) {
        const std::string base = "rq" + std::to_string(q);
        const std::vector<std::string> terms = {base + "a", base + "b", base + "c",
                                                base + "d", base + "e"};
        const std::string key = "rk" + std::to_string(q) + "x";
        const std::string value = "rv" + std::to_string(q) + "x";

        // Gold: every query term once, the key, the value twice (so the gold
        // option strictly outscores foreign pairs), diluted with pads so
        // repeated-term decoys win the cosine race.
        std::string gold_text = terms[0];
        for (std::size_t t = 1; t < terms.size(); ++t) gold_text += " " + terms[t];
        gold_text += " " + key + " " + value + " " + value;
        for (std::size_t p = 0; p < spec.gold_pad_tokens; ++p) {
            gold_text += " gp" + std::to_string(q) + "n" + std::to_string(p);
        }
        const std::string gold_id = push_chunk(gold_text);

        for (std::size_t dcy = 0; dcy < spec.decoys_per_question; ++dcy) {
            std::string text = terms[0];
            for (std::size_t r = 1; r < spec.term_repeats; ++r) text += " " + terms[0];
            text += " dp" + std::to_string(q) + "n" + std::to_string(dcy);
            push_chunk(std::move(text));
        }

        auto& sq = corpus.questions[q];
        sq.gold_doc_id = "stress";
        sq.gold_chunk_id = gold_id;
        sq.fact_text = gold_text;
        sq.item.question = "Which parameter follows " + terms[0] + " " + terms[1] + " " +
                           terms[2] + " " + terms[3] + " " + terms[4] + "?";
        sq.item.category = "cat" + std::to_string(q % 5);
    }

    std::uniform_int_distribution<std::size_t> pick(0, 499);
    for (std::size_t f = 0; f < spec.filler_chunks; ++f) {
        std::string text = "fl" + std::to_string(pick(rng));
        for (std::size_t w = 1; w < 8; ++w) text += " fl" + std::to_string(pick(rng));
        push_chunk(std::move(text));
    }

    for (std::size_t q = 0; q < spec.n_questions; ++q) {
        auto& sq = corpus.questions[q];
        const std::string gold_option =
            "rv" + std::to_string(q) + "x rk" + std::to_string(q) + "x";
        const std::size_t gold_pos = q % spec.n_options;
        sq.item.options.clear();
        std::size_t phantom = 0;
        for (std::size_t pos = 0; pos < spec.n_options; ++pos) {
            if (pos == gold_pos) {
                sq.item.options.push_back(gold_option);
            } else {
                // Phantom pairs: styled like real ones, planted nowhere.
                sq.item.options.push_back("rv" + std::to_string(q) + "d" +
                                          std::to_string(phantom) + " rk" + std::to_string(q) +
                                          "d" + std::to_string(phantom));
                ++phantom;
            }
        }
        sq.item.answer_index = gold_pos;
        validate(sq.item);
    }
    return corpus;
}

Document make_long_uniform_document(std::uint64_t seed, std::size_t min_tokens) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, 11);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < 10; ++i) {
        words.push_back("u" + std::to_string(seed % 97) + "w" + std::to_string(pick(rng)));
    }
    // One sentence repeated verbatim: consecutive windows embed identically,
    // every dissimilarity is zero, and the strict threshold never fires.
    const std::string sentence = join_sentence(words);
    const std::size_t repeats = min_tokens / words.size() + 2;

    Document doc;
    doc.id = "longdoc" + std::to_string(seed);
    doc.source_path = "synthetic";
    doc.text = sentence;
    for (std::size_t r = 1; r < repeats; ++r) {
        doc.text += ' ';
        doc.text += sentence;
    }
    return doc;
}

std::vector<std::string> resolve_gold_chunk_ids(const SynthCorpus& corpus,
                                                const std::vector<Chunk>& chunks) {
    std::vector<std::string> ids(corpus.questions.size());
    for (std::size_t q = 0; q < corpus.questions.size(); ++q) {
        const auto& sq = corpus.questions[q];
        for (const auto& chunk : chunks) {
            if (chunk.doc_id == sq.gold_doc_id &&
                chunk.text.find(sq.fact_text) != std::string::npos) {
                ids[q] = chunk.chunk_id;
                break;
            }
        }
    }
    return ids;
}

} // namespace specrag
