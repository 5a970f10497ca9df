//! Storage of [`AlgebraData`], text summaries, LaTeX tables and the command-line front end.

use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{legendre_character, DirichletCharFF};
use crate::engine::{hecke_algebras, hecke_algebras_for_form, sturm_bound, AlgebraData, EngineOptions, MsSpace};
use crate::error::{invalid, Error, Result};
use crate::ff::make_field;
use crate::forms::{a5_form, dihedral_specs, DihedralOptions, Quintic};

pub const STORAGE_HEADER: &str = "# heckealg storage v1";
pub const SCHEMA_VERSION: u32 = 1;

/// One line of a storage file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageRecord {
    pub version: u32,
    pub data: AlgebraData,
}

pub fn serialize_record(a: &AlgebraData) -> String {
    serde_json::to_string(&StorageRecord { version: SCHEMA_VERSION, data: a.clone() }).expect("plain data")
}

pub fn parse_record(line: &str, lineno: usize) -> Result<AlgebraData> {
    let r: StorageRecord =
        serde_json::from_str(line).map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
    if r.version != SCHEMA_VERSION {
        return Err(Error::Parse { line: lineno, msg: format!("unknown schema version {}", r.version) });
    }
    Ok(r.data)
}

/// Truncate `path` to an empty storage file.
pub fn create_storage_file(path: &Path) -> Result<()> {
    let mut f = File::create(path)?;
    writeln!(f, "{STORAGE_HEADER}")?;
    Ok(())
}

/// Append records, creating the file (with its header) if needed.
pub fn store(path: &Path, records: &[AlgebraData]) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = String::new();
    if fresh {
        buf.push_str(STORAGE_HEADER);
        buf.push('\n');
    }
    for r in records {
        buf.push_str(&serialize_record(r));
        buf.push('\n');
    }
    f.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn recover(path: &Path) -> Result<Vec<AlgebraData>> {
    let f = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in f.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if lineno == 1 {
            if line.trim_end() != STORAGE_HEADER {
                return Err(Error::Parse { line: 1, msg: "missing storage header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_record(&line, lineno)?);
    }
    Ok(out)
}

pub const RULE: &str = "---------------------------";

pub fn print_summary(records: &[AlgebraData]) -> String {
    let mut s = String::new();
    for a in records {
        s.push_str(&format!(
            "Level {}\nWeight {}\nCharacteristic {}\nGorenstein defect {}\nDimension {}\n\
             Number of operators used {}\nPrimes lt Hecke bound {}\nResidue degree {}\n{RULE}\n",
            a.level,
            a.weight,
            a.characteristic,
            a.gorenstein_defect,
            a.dimension,
            a.number_gen_used,
            a.sturm_prime_count,
            a.residue_degree
        ));
    }
    s
}

/// Names accepted in a LaTeX column selection.
pub const ACCESSORS: &[&str] = &[
    "level",
    "weight",
    "characteristic",
    "residue_degree",
    "dimension",
    "embedding_dimension",
    "nilpotency_order",
    "gorenstein_defect",
    "hecke_bound",
    "primes_up_to_hecke_bound",
    "number_operators_used",
    "polynomial",
    "image_name",
];

pub fn default_columns() -> Vec<(String, String)> {
    [
        ("level", "Level"),
        ("weight", "Wt"),
        ("residue_degree", "ResD"),
        ("dimension", "Dim"),
        ("embedding_dimension", "EmbDim"),
        ("nilpotency_order", "NilO"),
        ("gorenstein_defect", "GorDef"),
        ("number_operators_used", "\\#Ops"),
        ("primes_up_to_hecke_bound", "\\#(p$<$HB)"),
        ("image_name", "Gp"),
    ]
    .iter()
    .map(|(a, h)| (a.to_string(), h.to_string()))
    .collect()
}

fn accessor(a: &AlgebraData, name: &str) -> Result<String> {
    Ok(match name {
        "level" => a.level.to_string(),
        "weight" => a.weight.to_string(),
        "characteristic" => a.characteristic.to_string(),
        "residue_degree" => a.residue_degree.to_string(),
        "dimension" => a.dimension.to_string(),
        "embedding_dimension" => a.embedding_dimension.to_string(),
        "nilpotency_order" => a.nilpotency_order.to_string(),
        "gorenstein_defect" => a.gorenstein_defect.to_string(),
        "hecke_bound" => {
            let b = sturm_bound(a.level, a.weight);
            if b.denominator == 1 {
                b.numerator.to_string()
            } else {
                format!("{}/{}", b.numerator, b.denominator)
            }
        }
        "primes_up_to_hecke_bound" => a.sturm_prime_count.to_string(),
        "number_operators_used" => a.number_gen_used.to_string(),
        "polynomial" => a.defining_polynomial.as_ref().map(|c| format!("[{}]", c.join(","))).unwrap_or_default(),
        "image_name" => a.image_name.as_deref().map_or(String::new(), |s| format!("${s}$")),
        other => return invalid(format!("unknown column accessor {other:?}")),
    })
}

pub fn latex_string(records: &[AlgebraData], columns: &[(String, String)]) -> Result<String> {
    for (name, _) in columns {
        if !ACCESSORS.contains(&name.as_str()) {
            return invalid(format!("unknown column accessor {name:?}"));
        }
    }
    let spec = vec!["c"; columns.len()].join("|");
    let mut s = format!("\\begin{{longtable}}{{||{spec}||}}\n\\hline\n");
    s.push_str(&columns.iter().map(|(_, h)| h.as_str()).collect::<Vec<_>>().join(" & "));
    s.push_str(" \\\\\n\\hline\\endhead\\hline\\endfoot\\hline\\hline\\endlastfoot\n");
    for a in records {
        let cells = columns.iter().map(|(n, _)| accessor(a, n)).collect::<Result<Vec<_>>>()?;
        s.push_str(&cells.join(" & "));
        s.push_str(" \\\\\n");
    }
    s.push_str("\\end{longtable}\n");
    Ok(s)
}

pub fn latex_table(records: &[AlgebraData], path: &Path, columns: Option<&[(String, String)]>) -> Result<()> {
    let cols = columns.map(<[_]>::to_vec).unwrap_or_else(default_columns);
    std::fs::write(path, latex_string(records, &cols)?)?;
    Ok(())
}

/// Parse "level:Level,weight:Wt".
pub fn parse_columns(s: &str) -> Result<Vec<(String, String)>> {
    s.split(',')
        .map(|item| match item.split_once(':') {
            Some((a, h)) => Ok((a.trim().to_string(), h.to_string())),
            None => Ok((item.trim().to_string(), item.trim().to_string())),
        })
        .collect()
}

#[derive(Parser, Debug)]
#[command(name = "heckealg", version, about = "Local factors of mod p Hecke algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All local factors for a level, weight and character.
    Compute {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: u32,
        /// Coefficient field, "p" or "p^m".
        #[arg(long, default_value = "2")]
        char_field: String,
        #[arg(long, conflicts_with = "legendre")]
        trivial_char: bool,
        #[arg(long)]
        legendre: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Local factors of the dihedral forms attached to the class group of Q(sqrt(+-N)).
    Dihedral {
        #[arg(long)]
        level: u64,
        #[arg(long, value_delimiter = ',', conflicts_with = "bound")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long)]
        completely_split: bool,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        quad_disc: i64,
        /// Keep one character per order instead of every conjugacy class.
        #[arg(long)]
        single_choice: bool,
        /// Only list the targets.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Local factor of the icosahedral form of a quintic.
    A5 {
        /// Coefficients "c0,...,c5", constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        level: Option<u64>,
        /// Only print the predicted level.
        #[arg(long)]
        level_only: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Append the records of the input files to a storage file (creating it).
    Store {
        #[arg(long)]
        file: PathBuf,
        /// Start from an empty file.
        #[arg(long)]
        create: bool,
        inputs: Vec<PathBuf>,
    },
    /// Print the records of a storage file, one per line.
    Recover {
        #[arg(long)]
        file: PathBuf,
    },
    /// Human readable summary of a storage file.
    Print {
        #[arg(long)]
        file: PathBuf,
    },
    /// Write a LaTeX longtable for a storage file.
    Latex {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Column selection "accessor:Header,...".
        #[arg(long)]
        columns: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpaceArg {
    Full,
    Plus,
    Minus,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Use primes up to this bound instead of the Sturm bound.
    #[arg(long)]
    pub prime_bound: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub first_test: usize,
    #[arg(long, default_value_t = 1)]
    pub test_interval: usize,
    #[arg(long, default_value_t = 3)]
    pub when_test_p: usize,
    #[arg(long, default_value_t = 4)]
    pub when_test_bad: usize,
    #[arg(long, value_delimiter = ',')]
    pub test_sequence: Vec<u64>,
    #[arg(long)]
    pub dimension_factor: Option<usize>,
    #[arg(long)]
    pub dimension_factor_override: bool,
    #[arg(long, value_enum, default_value = "full")]
    pub ms_space: SpaceArg,
    /// Work on the full space instead of the cuspidal subspace.
    #[arg(long)]
    pub not_cuspidal: bool,
    #[arg(long, default_value_t = 0)]
    pub degree_bound: usize,
    /// Keep the algebra over the base field.
    #[arg(long)]
    pub no_residue_field: bool,
    #[arg(long)]
    pub no_minimal: bool,
    #[arg(long)]
    pub force_local: bool,
    #[arg(long)]
    pub drop_eisenstein: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl EngineArgs {
    pub fn options(&self) -> EngineOptions {
        let mut o = EngineOptions {
            user_bound: self.prime_bound,
            first_test: self.first_test,
            test_interval: self.test_interval,
            when_test_p: self.when_test_p,
            when_test_bad: self.when_test_bad,
            test_sequence: self.test_sequence.clone(),
            dimension_factor: self.dimension_factor,
            dimension_factor_override: self.dimension_factor_override,
            ms_space: match self.ms_space {
                SpaceArg::Full => MsSpace::Full,
                SpaceArg::Plus => MsSpace::Plus,
                SpaceArg::Minus => MsSpace::Minus,
            },
            cuspidal: !self.not_cuspidal,
            degree_bound: self.degree_bound,
            over_residue_field: !self.no_residue_field,
            try_minimal: !self.no_minimal,
            force_local: self.force_local,
            drop_eisenstein: self.drop_eisenstein,
            ..EngineOptions::default()
        };
        if let Some(s) = self.seed {
            o.seed = s;
        }
        o
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Append the results to this storage file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long)]
    pub quiet: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Unsupported(_) | Error::Parse { .. } => EXIT_INVALID,
        _ => EXIT_ERROR,
    }
}

fn parse_char_field(s: &str) -> Result<crate::ff::Field> {
    let (p, m) = match s.split_once('^') {
        Some((p, m)) => (p.trim(), m.trim()),
        None => (s.trim(), "1"),
    };
    let p: u64 = p.parse().map_err(|_| Error::InvalidArgument(format!("bad field {s:?}")))?;
    let m: u32 = m.parse().map_err(|_| Error::InvalidArgument(format!("bad field {s:?}")))?;
    make_field(p, m)
}

fn emit(records: &[AlgebraData], out: &OutArgs, stdout: &mut dyn Write) -> Result<i32> {
    if let Some(f) = &out.file {
        store(f, records)?;
    }
    if !out.quiet {
        stdout.write_all(print_summary(records).as_bytes())?;
    }
    Ok(if records.iter().all(|a| a.stop_certified) { EXIT_OK } else { EXIT_UNCERTIFIED })
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Compute { level, weight, char_field, trivial_char: _, legendre, engine, out } => {
            let field = parse_char_field(&char_field)?;
            let chi =
                if legendre { legendre_character(level, &field)? } else { DirichletCharFF::trivial(level, &field) };
            let r = hecke_algebras(&chi, weight, &engine.options())?;
            emit(&r.algebras, &out, stdout)
        }
        Command::Dihedral {
            level,
            primes,
            bound,
            completely_split,
            quad_disc,
            single_choice,
            list,
            jobs,
            engine,
            out,
        } => {
            let opts = DihedralOptions {
                list_of_primes: primes,
                bound,
                completely_split,
                quad_disc,
                all_conjugacy_classes: !single_choice,
                ..Default::default()
            };
            let specs = dihedral_specs(level, &opts)?;
            if list {
                for s in &specs {
                    writeln!(stdout, "{}", serde_json::to_string(s).expect("plain data"))?;
                }
                return Ok(EXIT_OK);
            }
            let eo = engine.options();
            let run = |s: &crate::forms::DihedralSpec| -> Result<Vec<AlgebraData>> {
                Ok(hecke_algebras_for_form(&s.to_form()?, &eo)?.algebras)
            };
            let results: Vec<Result<Vec<AlgebraData>>> = if jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                pool.install(|| specs.par_iter().map(run).collect())
            } else {
                specs.iter().map(run).collect()
            };
            let mut all = Vec::new();
            for r in results {
                all.extend(r?);
            }
            emit(&all, &out, stdout)
        }
        Command::A5 { poly, level, level_only, engine, out } => {
            let mut q = Quintic::parse(&poly)?;
            if let Some(l) = level {
                q = q.with_level(l);
            }
            let spec = a5_form(&q)?;
            if level_only {
                writeln!(stdout, "{}", spec.level())?;
                return Ok(EXIT_OK);
            }
            let r = hecke_algebras_for_form(&spec, &engine.options())?;
            emit(&r.algebras, &out, stdout)
        }
        Command::Store { file, create, inputs } => {
            if create {
                create_storage_file(&file)?;
            }
            let mut all = Vec::new();
            for i in &inputs {
                all.extend(recover(i)?);
            }
            store(&file, &all)?;
            Ok(EXIT_OK)
        }
        Command::Recover { file } => {
            for r in recover(&file)? {
                writeln!(stdout, "{}", serialize_record(&r))?;
            }
            Ok(EXIT_OK)
        }
        Command::Print { file } => {
            stdout.write_all(print_summary(&recover(&file)?).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Latex { file, out, columns } => {
            let cols = columns.as_deref().map(parse_columns).transpose()?;
            latex_table(&recover(&file)?, &out, cols.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

/// Run the command line, writing normal output to `stdout`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli, stdout) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample(level: u64, image: Option<&str>) -> AlgebraData {
        AlgebraData {
            level,
            weight: 2,
            characteristic: 2,
            base_field_degree: 1,
            character_order: 1,
            character_conductor: 1,
            character_generator_values: vec!["1".into()],
            algebra_field_degree: 1,
            residue_degree: 1,
            dimension: 4,
            gorenstein_defect: 2,
            embedding_dimension: 3,
            nilpotency_order: 1,
            relations_field_degree: 1,
            relations: Some(vec![vec![(vec![2, 0, 0], "1".into())]]),
            number_gen_used: 6,
            sturm_prime_count: 20,
            image_name: image.map(str::to_string),
            defining_polynomial: None,
            stop_certified: true,
            torsion_warning: false,
        }
    }

    #[test]
    fn storage_round_trip_and_append() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.txt");
        create_storage_file(&p).unwrap();
        assert!(recover(&p).unwrap().is_empty());
        let a = sample(431, Some("D_{3}"));
        let b = sample(229, None);
        store(&p, std::slice::from_ref(&a)).unwrap();
        store(&p, std::slice::from_ref(&b)).unwrap();
        assert_eq!(recover(&p).unwrap(), vec![a.clone(), b]);
        let line = serialize_record(&a);
        assert_eq!(serialize_record(&parse_record(&line, 1).unwrap()), line);
    }

    #[test]
    fn malformed_lines_are_located() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.txt");
        store(&p, &[sample(431, None)]).unwrap();
        let mut f = OpenOptions::new().append(true).open(&p).unwrap();
        writeln!(f, "{{not json").unwrap();
        match recover(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        std::fs::write(&p, "garbage\n").unwrap();
        assert!(matches!(recover(&p), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn summaries() {
        assert_eq!(print_summary(&[]), "");
        let s = print_summary(&[sample(431, None)]);
        assert!(s.starts_with("Level 431\nWeight 2\nCharacteristic 2\nGorenstein defect 2\nDimension 4\n"));
        assert!(s.ends_with("Primes lt Hecke bound 20\nResidue degree 1\n---------------------------\n"));
    }

    #[test]
    fn latex() {
        let t = latex_string(&[sample(431, Some("D_{3}")), sample(229, None)], &default_columns()).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "\\begin{longtable}{||c|c|c|c|c|c|c|c|c|c||}");
        assert_eq!(lines[2], "Level & Wt & ResD & Dim & EmbDim & NilO & GorDef & \\#Ops & \\#(p$<$HB) & Gp \\\\");
        assert_eq!(lines[4], "431 & 2 & 1 & 4 & 3 & 1 & 2 & 6 & 20 & $D_{3}$ \\\\");
        assert!(lines[5].ends_with("& 20 &  \\\\"));
        let empty = latex_string(&[], &default_columns()).unwrap();
        assert_eq!(empty.lines().count(), 5);
        let bad = vec![("nope".to_string(), "X".to_string())];
        assert!(latex_string(&[], &bad).is_err());
        let cols = parse_columns("level:N,hecke_bound:HB").unwrap();
        let t = latex_string(&[sample(431, None)], &cols).unwrap();
        assert!(t.contains("431 & 72 \\\\"));
    }

    #[test]
    fn exit_codes() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["heckealg", "bogus"], &mut out, &mut err), EXIT_INVALID);
        assert_eq!(run(["heckealg", "a5", "--poly", "1,2,3", "--level-only"], &mut out, &mut err), EXIT_INVALID);
        out.clear();
        let code = run(["heckealg", "a5", "--poly", "344,3106,-1795,-780,-1,1", "--level-only"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert_eq!(String::from_utf8(out).unwrap(), "1951\n");
    }

    #[test]
    fn compute_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        for p in [&a, &b] {
            let args = ["heckealg", "compute", "--level", "11", "--weight", "2", "--char-field", "5", "--quiet", "--file"];
            let mut v: Vec<OsString> = args.iter().map(OsString::from).collect();
            v.push(p.as_os_str().to_owned());
            assert_eq!(run(v, &mut Vec::new(), &mut Vec::new()), EXIT_OK);
        }
        let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(x, y);
        assert_eq!(recover(&a).unwrap().len(), 1);
    }
}
