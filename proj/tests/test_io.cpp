#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "lexca/corpus_io.hpp"
#include "lexca/csv.hpp"
#include "lexca/sha256.hpp"

#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace lexca;
using testutil::TempDir;

TEST_CASE("parse_delimited handles quoting, CRLF and trailing newline") {
    auto recs = parse_delimited("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n", ',');
    REQUIRE(recs.size() == 2);
    CHECK(recs[0] == std::vector<std::string>{"a", "b"});
    CHECK(recs[1] == std::vector<std::string>{"x,y", "he said \"hi\""});

    recs = parse_delimited("a,b\r\nc,d\r\n", ',');
    REQUIRE(recs.size() == 2);
    CHECK(recs[1] == std::vector<std::string>{"c", "d"});

    // embedded newline inside quotes stays in the field
    recs = parse_delimited("\"line1\nline2\",x\n", ',');
    REQUIRE(recs.size() == 1);
    CHECK(recs[0][0] == "line1\nline2");

    // empty trailing field is real, trailing newline is not a record
    recs = parse_delimited("a,\n", ',');
    REQUIRE(recs.size() == 1);
    CHECK(recs[0] == std::vector<std::string>{"a", ""});

    CHECK(parse_delimited("", ',').empty());
    CHECK(parse_delimited("\n\n", ',').empty());

    recs = parse_delimited("a\tb\nc\td,e\n", '\t');
    REQUIRE(recs.size() == 2);
    CHECK(recs[1] == std::vector<std::string>{"c", "d,e"});
}

TEST_CASE("parse_delimited reports 1-based line numbers on errors") {
    CHECK_THROWS_WITH(parse_delimited("ok,ok\nbad\"field,x\n", ','),
                      Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_delimited("\"a\"tail,x\n", ','),
                      Catch::Matchers::ContainsSubstring("content after closing quote"));
    CHECK_THROWS_WITH(parse_delimited("x\n\"open\nstill open", ','),
                      Catch::Matchers::ContainsSubstring("unterminated"));
    CHECK_THROWS_AS(parse_delimited("\"a", ','), InputFormatError);
}

TEST_CASE("write then parse round-trips arbitrary fields") {
    oracle::Rng rng(7);
    const std::string alphabet = "ab,\"\n\r\t x";
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<std::string>> rows;
        int n_rows = rng.range(1, 5);
        int n_cols = rng.range(1, 5);
        bool degenerate = false;
        for (int r = 0; r < n_rows; ++r) {
            std::vector<std::string> row;
            for (int c = 0; c < n_cols; ++c) {
                std::string f;
                int len = rng.range(0, 8);
                for (int i = 0; i < len; ++i) f.push_back(alphabet[rng.below(alphabet.size())]);
                row.push_back(std::move(f));
            }
            // a record whose only field is empty is indistinguishable from a
            // blank line, which the parser skips; exclude that one shape
            if (row.size() == 1 && row[0].empty()) degenerate = true;
            rows.push_back(std::move(row));
        }
        if (degenerate) continue;
        for (char delim : {',', '\t'}) {
            std::ostringstream out;
            for (const auto& row : rows) write_delimited_row(out, row, delim);
            auto parsed = parse_delimited(out.str(), delim);
            CHECK(parsed == rows);
        }
    }
}

static const char* k_good_csv =
    "id,title,author,country,university,year,text\n"
    "d1,First,Doe,US,U1,2005,\"Hello, world of text.\"\n"
    "d2,Second,Roe,NL,U2,2006,More text here.\n";

TEST_CASE("read_documents parses the corpus CSV layout") {
    TempDir tmp;
    auto path = tmp.write("corpus.csv", k_good_csv);
    auto docs = read_documents(path);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "d1");
    CHECK(docs[0].first_author == "Doe");
    CHECK(docs[0].year == 2005);
    CHECK(docs[0].text == "Hello, world of text.");
    CHECK(docs[1].university == "U2");
}

TEST_CASE("read_documents accepts reordered header columns") {
    TempDir tmp;
    auto path = tmp.write("corpus.csv",
                          "text,year,id,title,author,country,university\n"
                          "some text,2005,d1,T,A,US,U1\n");
    auto docs = read_documents(path);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].id == "d1");
    CHECK(docs[0].text == "some text");
    CHECK(docs[0].year == 2005);
}

TEST_CASE("read_documents rejects malformed headers and records") {
    TempDir tmp;
    auto parse = [&](const std::string& content) {
        return read_documents(tmp.write("c.csv", content));
    };
    CHECK_THROWS_WITH(parse("id,title,author,country,university,year,text,extra\n"),
                      Catch::Matchers::ContainsSubstring("unexpected column"));
    CHECK_THROWS_WITH(parse("id,title,author,country,university,year\n"),
                      Catch::Matchers::ContainsSubstring("missing column \"text\""));
    CHECK_THROWS_WITH(parse("id,id,title,author,country,university,year,text\n"),
                      Catch::Matchers::ContainsSubstring("duplicate column"));
    CHECK_THROWS_WITH(parse(""), Catch::Matchers::ContainsSubstring("missing header"));
    CHECK_THROWS_WITH(parse("id,title,author,country,university,year,text\nd1,T,A,US,U1,2005\n"),
                      Catch::Matchers::ContainsSubstring("expected 7 fields, got 6"));
    CHECK_THROWS_WITH(parse("id,title,author,country,university,year,text\nd1,T,A,US,U1,MMV,x\n"),
                      Catch::Matchers::ContainsSubstring("unparseable year"));
    CHECK_THROWS_WITH(parse("id,title,author,country,university,year,text\n ,T,A,US,U1,2005,x\n"),
                      Catch::Matchers::ContainsSubstring("missing id"));
    CHECK_THROWS_AS(read_documents(tmp.path() / "no-such-file.csv"), IoError);
}

TEST_CASE("read_documents honors tsv and jsonl formats") {
    TempDir tmp;
    IngestOptions tsv;
    tsv.format = CorpusFormat::Tsv;
    auto docs = read_documents(
        tmp.write("c.tsv",
                  "id\ttitle\tauthor\tcountry\tuniversity\tyear\ttext\n"
                  "d1\tT, with comma\tA\tUS\tU1\t2005\tplain text\n"),
        tsv);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].title == "T, with comma");

    IngestOptions jsonl;
    jsonl.format = CorpusFormat::Jsonl;
    docs = read_documents(
        tmp.write("c.jsonl",
                  R"({"id":"d1","title":"T","author":"A","country":"US","university":"U1","year":2005,"text":"alpha beta"})"
                  "\n\n"
                  R"({"id":"d2","title":"T2","author":"B","country":"NL","university":"U2","year":"2006","text":"gamma"})"
                  "\n"),
        jsonl);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].year == 2005);
    CHECK(docs[1].year == 2006);  // string years are accepted
    CHECK(docs[1].text == "gamma");
}

TEST_CASE("jsonl errors carry line or record positions") {
    TempDir tmp;
    IngestOptions jsonl;
    jsonl.format = CorpusFormat::Jsonl;
    auto parse = [&](const std::string& content) {
        return read_documents(tmp.write("c.jsonl", content), jsonl);
    };
    CHECK_THROWS_WITH(
        parse(R"({"id":"d1","title":"T","author":"A","country":"US","university":"U1","year":2005,"text":"x"})"
              "\nnot json\n"),
        Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse("[1,2,3]\n"), Catch::Matchers::ContainsSubstring("expected an object"));
    CHECK_THROWS_WITH(
        parse(R"({"id":"d1","title":"T","author":"A","country":"US","university":"U1","year":2005})"
              "\n"),
        Catch::Matchers::ContainsSubstring("missing field \"text\""));
    CHECK_THROWS_WITH(
        parse(R"({"id":"d1","title":"T","author":"A","country":"US","university":"U1","year":[],"text":"x"})"
              "\n"),
        Catch::Matchers::ContainsSubstring("unparseable year"));
    CHECK_THROWS_WITH(
        parse(R"({"id":"d1","title":7,"author":"A","country":"US","university":"U1","year":2005,"text":"x"})"
              "\n"),
        Catch::Matchers::ContainsSubstring("must be a string"));
}

TEST_CASE("corpus format names round-trip") {
    for (auto f : {CorpusFormat::Csv, CorpusFormat::Tsv, CorpusFormat::Jsonl}) {
        CHECK(corpus_format_from_string(to_string(f)) == f);
    }
    CHECK_THROWS_AS(corpus_format_from_string("xml"), ArgumentError);
}

TEST_CASE("load_stopwords reads one entry per line") {
    TempDir tmp;
    auto stops = load_stopwords(tmp.write("stops.txt", "The\n\nof\n  and  \n"));
    CHECK(stops.size() == 3);
    CHECK(stops.contains("the"));
    CHECK(stops.contains("and"));
    CHECK(stops.source_id() == "stops.txt");
    CHECK_THROWS_WITH(load_stopwords(tmp.write("bad.txt", "two words\n")),
                      Catch::Matchers::ContainsSubstring("bad.txt:1"));
    CHECK_THROWS_AS(load_stopwords(tmp.path() / "missing.txt"), IoError);
}

TEST_CASE("load_stem_dictionary reads surface<TAB>root lines") {
    TempDir tmp;
    auto stems = load_stem_dictionary(tmp.write("stems.tsv", "Brands\tbrand\nprices\tprice\n"));
    CHECK(stems.size() == 2);
    CHECK(stems.apply("brands") == "brand");
    CHECK_THROWS_WITH(load_stem_dictionary(tmp.write("bad1.tsv", "no-tab-here\n")),
                      Catch::Matchers::ContainsSubstring("bad1.tsv:1"));
    CHECK_THROWS_WITH(load_stem_dictionary(tmp.write("bad2.tsv", "a\t\n")),
                      Catch::Matchers::ContainsSubstring("empty surface or root"));
    CHECK_THROWS_AS(load_stem_dictionary(tmp.write("bad3.tsv", "a\tb\na\tc\n")),
                    InputFormatError);
}

TEST_CASE("bundled demo corpus ingests cleanly") {
    auto dir = testutil::data_dir();
    auto stops = load_stopwords(dir / "stopwords_en.txt");
    auto stems = load_stem_dictionary(dir / "stems_demo.tsv");
    Corpus corpus = ingest_corpus(dir / "toy_corpus.csv", IngestOptions{}, stops, stems);
    REQUIRE(corpus.size() == 3);
    CHECK(corpus.documents[0].year == 2005);
    CHECK(corpus.documents[2].first_author == "Doe");
    CHECK(corpus.provenance.stoplist_id == "stopwords_en.txt");
}

TEST_CASE("sha256 matches published vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // one-shot equals streaming in odd chunk sizes
    std::string data(1000, '\0');
    oracle::Rng rng(99);
    for (char& c : data) c = static_cast<char>(rng.below(256));
    Sha256 h;
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t take = std::min<std::size_t>(1 + rng.below(97), data.size() - pos);
        h.update(data.data() + pos, take);
        pos += take;
    }
    CHECK(h.hex_digest() == sha256_hex(data));
}
