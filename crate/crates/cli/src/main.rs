use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use nl2pbt_core::codegen::{emit_file, render_derivation, EmitConfig};
use nl2pbt_core::corpus::{evaluate, load_corpus};
use nl2pbt_core::lexicon::{shipped, tokenize, Lexicon};
use nl2pbt_core::logic::print_term;
use nl2pbt_core::parser::{logical_forms, parse, ParseConfig, ParseError};
use nl2pbt_core::Term;

const EXIT_NO_PARSE: u8 = 1;
const EXIT_UNKNOWN_WORD: u8 = 2;
const EXIT_INPUT_ERROR: u8 = 3;
const EXIT_AMBIGUOUS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "nl2pbt",
    version,
    about = "Parse English property descriptions into logical forms and fast-check tests"
)]
struct Cli {
    /// Lexicon file to load; repeat to merge several, in order.
    /// Overrides NL2PBT_LEXICON_PATH and the built-in lexicon.
    #[arg(long = "lexicon", global = true, value_name = "FILE")]
    lexicons: Vec<PathBuf>,

    /// Colon-separated lexicon files or directories of *.lex files.
    #[arg(long, env = "NL2PBT_LEXICON_PATH", hide = true, global = true)]
    lexicon_path: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Input {
    /// Sentence to process.
    #[arg(required_unless_present = "input", conflicts_with = "input")]
    sentence: Option<String>,

    /// File with one sentence per line (blank lines and # comments skipped).
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,

    /// Upper bound on enumerated derivations per sentence.
    #[arg(long, default_value_t = 256)]
    max_parses: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print the distinct logical forms of a sentence.
    Parse {
        #[command(flatten)]
        input: Input,
        /// Also print each derivation tree.
        #[arg(long)]
        show_derivations: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Emit a fast-check test file for a sentence.
    Gen {
        #[command(flatten)]
        input: Input,
        /// Output file, or a directory when used with --input.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, default_value = "property")]
        test_name: String,
        #[arg(long, default_value = "./subjects")]
        subjects_module: String,
    },
    /// Check a corpus of sentences against their expected forms.
    Eval {
        corpus: PathBuf,
        #[arg(long, default_value_t = 256)]
        max_parses: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let lex = match load_lexicon(&cli.lexicons, cli.lexicon_path.as_deref()) {
        Ok(l) => l,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    for w in lex.warnings() {
        eprintln!("warning: {w}");
    }
    let code = match cli.command {
        Command::Parse { input, show_derivations, format } => run_parse(&lex, &input, show_derivations, format),
        Command::Gen { input, out, test_name, subjects_module } => {
            let cfg = EmitConfig { test_name, subjects_module, ..EmitConfig::default() };
            run_gen(&lex, &input, out.as_deref(), &cfg)
        }
        Command::Eval { corpus, max_parses, format } => run_eval(&lex, &corpus, max_parses, format),
    };
    ExitCode::from(code)
}

fn load_lexicon(flags: &[PathBuf], search_path: Option<&str>) -> Result<Lexicon, String> {
    let files: Vec<PathBuf> = if !flags.is_empty() {
        flags.to_vec()
    } else if let Some(sp) = search_path.filter(|s| !s.trim().is_empty()) {
        expand_search_path(sp)?
    } else {
        return Ok(shipped::sttp());
    };
    let mut lex = Lexicon::new();
    for f in &files {
        lex = lex.merge(&Lexicon::load_file(f).map_err(|e| e.to_string())?);
    }
    Ok(lex)
}

fn expand_search_path(sp: &str) -> Result<Vec<PathBuf>, String> {
    let mut files = Vec::new();
    for part in sp.split(':').filter(|p| !p.is_empty()) {
        let p = Path::new(part);
        if p.is_dir() {
            let rd = fs::read_dir(p).map_err(|e| format!("{part}: {e}"))?;
            let mut lex_files: Vec<PathBuf> = rd
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "lex") && f.is_file())
                .collect();
            lex_files.sort();
            files.extend(lex_files);
        } else {
            files.push(p.to_path_buf());
        }
    }
    Ok(files)
}

fn sentences(input: &Input) -> Result<Vec<String>, String> {
    match (&input.sentence, &input.input) {
        (Some(s), _) => Ok(vec![s.clone()]),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect())
        }
        (None, None) => Err("no sentence given".into()),
    }
}

#[derive(Serialize)]
struct ParseReport {
    sentence: String,
    forms: Vec<String>,
    parse_count: usize,
    deduped_count: usize,
    truncated: bool,
    unknown_words: Vec<String>,
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivations: Option<Vec<String>>,
    #[serde(skip)]
    terms: Vec<Term>,
    #[serde(skip)]
    exit: u8,
}

fn analyse(sentence: &str, lex: &Lexicon, cfg: &ParseConfig, show: bool) -> ParseReport {
    let mut r = ParseReport {
        sentence: sentence.to_string(),
        forms: Vec::new(),
        parse_count: 0,
        deduped_count: 0,
        truncated: false,
        unknown_words: Vec::new(),
        error: None,
        derivations: None,
        terms: Vec::new(),
        exit: 0,
    };
    let toks = match tokenize(sentence) {
        Ok(t) => t,
        Err(e) => {
            r.error = Some(e.to_string());
            r.exit = EXIT_NO_PARSE;
            return r;
        }
    };
    let out = match parse(&toks, lex, cfg) {
        Ok(o) => o,
        Err(e) => {
            r.exit = match &e {
                ParseError::UnknownWords(ws) => {
                    r.unknown_words = ws.clone();
                    EXIT_UNKNOWN_WORD
                }
                _ => EXIT_NO_PARSE,
            };
            r.error = Some(e.to_string());
            return r;
        }
    };
    r.parse_count = out.found;
    r.truncated = out.truncated;
    if show {
        r.derivations = Some(out.derivations.iter().map(render_derivation).collect());
    }
    match logical_forms(&out.derivations, cfg) {
        Ok(forms) => {
            r.forms = forms.iter().map(print_term).collect();
            r.deduped_count = forms.len();
            r.terms = forms;
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    if r.terms.is_empty() {
        r.exit = EXIT_NO_PARSE;
    }
    r
}

fn analyse_all(sentences: &[String], lex: &Lexicon, cfg: &ParseConfig, show: bool) -> Vec<ParseReport> {
    sentences.par_iter().map(|s| analyse(s, lex, cfg, show)).collect()
}

fn parse_config(max_parses: usize) -> ParseConfig {
    ParseConfig { max_derivations: max_parses.max(1), ..ParseConfig::default() }
}

fn report_problem(r: &ParseReport) {
    if !r.unknown_words.is_empty() {
        eprintln!("{}: unknown word(s): {}", r.sentence, r.unknown_words.join(", "));
    } else if let Some(e) = &r.error {
        eprintln!("{}: {e}", r.sentence);
    } else if r.terms.is_empty() {
        eprintln!("{}: no parse", r.sentence);
    }
}

fn run_parse(lex: &Lexicon, input: &Input, show: bool, format: Format) -> u8 {
    let sents = match sentences(input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let reports = analyse_all(&sents, lex, &parse_config(input.max_parses), show);
    let mut stdout = std::io::stdout().lock();
    match format {
        Format::Json => {
            let json = if input.input.is_some() {
                serde_json::to_string_pretty(&reports)
            } else {
                serde_json::to_string_pretty(&reports[0])
            };
            let _ = writeln!(stdout, "{}", json.expect("report serializes"));
        }
        Format::Text => {
            let batch = reports.len() > 1 || input.input.is_some();
            for r in &reports {
                if batch {
                    let _ = writeln!(stdout, "# {}", r.sentence);
                }
                for (i, d) in r.derivations.iter().flatten().enumerate() {
                    let _ = writeln!(stdout, "derivation {} of {}:\n{d}", i + 1, r.parse_count);
                }
                for f in &r.forms {
                    let _ = writeln!(stdout, "{f}");
                }
            }
        }
    }
    for r in &reports {
        report_problem(r);
    }
    reports.iter().map(|r| r.exit).max().unwrap_or(0)
}

fn run_gen(lex: &Lexicon, input: &Input, out: Option<&Path>, cfg: &EmitConfig) -> u8 {
    let sents = match sentences(input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let batch = input.input.is_some();
    let reports = analyse_all(&sents, lex, &parse_config(input.max_parses), false);
    if batch {
        if let Some(dir) = out {
            if let Err(e) = fs::create_dir_all(dir) {
                eprintln!("error: {}: {e}", dir.display());
                return EXIT_INPUT_ERROR;
            }
        }
    }
    let mut worst = 0;
    for (i, r) in reports.iter().enumerate() {
        let code = match r.terms.as_slice() {
            [] => {
                report_problem(r);
                r.exit.max(EXIT_NO_PARSE)
            }
            [form] => {
                let cfg = if batch {
                    EmitConfig { test_name: format!("{} {}", cfg.test_name, i + 1), ..cfg.clone() }
                } else {
                    cfg.clone()
                };
                match emit_file(form, &cfg) {
                    Ok(text) => write_output(
                        &text,
                        out.map(|o| if batch { o.join(format!("{}.test.js", i + 1)) } else { o.to_path_buf() }),
                    ),
                    Err(e) => {
                        eprintln!("{}: {e}", r.sentence);
                        EXIT_NO_PARSE
                    }
                }
            }
            many => {
                eprintln!("{}: {} distinct logical forms:", r.sentence, many.len());
                for f in &r.forms {
                    eprintln!("  {f}");
                }
                EXIT_AMBIGUOUS
            }
        };
        worst = worst.max(code);
    }
    worst
}

fn write_output(text: &str, path: Option<PathBuf>) -> u8 {
    match path {
        Some(p) => match fs::write(&p, text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                EXIT_INPUT_ERROR
            }
        },
        None => {
            print!("{text}");
            0
        }
    }
}

#[derive(Serialize)]
struct EvalJson {
    total: usize,
    passed: usize,
    cases: Vec<EvalCaseJson>,
}

#[derive(Serialize)]
struct EvalCaseJson {
    id: u32,
    sentence: String,
    matched: bool,
    parse_count: usize,
    deduped_count: usize,
    truncated: bool,
    expected: String,
    forms: Vec<String>,
    expected_adequate: bool,
    error: Option<String>,
}

fn run_eval(lex: &Lexicon, corpus: &Path, max_parses: usize, format: Format) -> u8 {
    let cases = match fs::read_to_string(corpus)
        .map_err(|e| format!("{}: {e}", corpus.display()))
        .and_then(|text| load_corpus(&text, &corpus.display().to_string()).map_err(|e| e.to_string()))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let report = evaluate(&cases, lex, &parse_config(max_parses));
    let rows: Vec<EvalCaseJson> = report
        .cases
        .iter()
        .zip(&cases)
        .map(|(r, c)| EvalCaseJson {
            id: r.id,
            sentence: r.sentence.clone(),
            matched: r.matched,
            parse_count: r.parse_count,
            deduped_count: r.forms.len(),
            truncated: r.truncated,
            expected: print_term(&c.expected_form),
            forms: r.forms.iter().map(print_term).collect(),
            expected_adequate: c.expected_adequate,
            error: r.error.clone(),
        })
        .collect();
    let mut stdout = std::io::stdout().lock();
    match format {
        Format::Json => {
            let json = EvalJson { total: rows.len(), passed: report.passed(), cases: rows };
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&json).expect("report serializes"));
        }
        Format::Text => {
            let _ = writeln!(stdout, "{:>4}  {:<6}{:>7}{:>7}  sentence", "id", "result", "parses", "forms");
            for row in &rows {
                let verdict = if row.matched { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    stdout,
                    "{:>4}  {:<6}{:>7}{:>7}  {}",
                    row.id, verdict, row.parse_count, row.deduped_count, row.sentence
                );
                if !row.matched {
                    let _ = writeln!(stdout, "        expected: {}", row.expected);
                    for f in &row.forms {
                        let _ = writeln!(stdout, "        got:      {f}");
                    }
                    if let Some(e) = &row.error {
                        let _ = writeln!(stdout, "        error:    {e}");
                    }
                }
            }
            let _ = writeln!(stdout, "{}/{} passed", report.passed(), rows.len());
        }
    }
    if report.all_passed() {
        0
    } else {
        EXIT_NO_PARSE
    }
}
