//! Result CSV: a `# rgg-faultnet v<version> seed=<seed>` line and the
//! column line, then one line per row. A `# complete rows=<k>` trailer is
//! written only after the last row. Reals carry 10 significant digits; columns that do
//! not apply to a row are empty.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Metric;

pub const COLUMNS: [&str; 12] = [
    "n",
    "eta",
    "beta",
    "delta",
    "epsilon",
    "metric",
    "trials",
    "disconnected",
    "p_hat",
    "ci_low",
    "ci_high",
    "p_approx",
];

const COMPLETE_MARKER: &str = "# complete rows=";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultRow {
    pub n: usize,
    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub metric: Option<Metric>,
    pub trials: Option<u64>,
    pub disconnected: Option<u64>,
    pub p_hat: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub p_approx: Option<f64>,
}

impl ResultRow {
    fn fields(&self) -> [String; 12] {
        let real = |v: Option<f64>| v.map(format_sig10).unwrap_or_default();
        let int = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.n.to_string(),
            real(self.eta),
            real(self.beta),
            real(self.delta),
            real(self.epsilon),
            self.metric
                .map(|m| m.as_str().to_string())
                .unwrap_or_default(),
            int(self.trials),
            int(self.disconnected),
            real(self.p_hat),
            real(self.ci_low),
            real(self.ci_high),
            real(self.p_approx),
        ]
    }

    /// The row as it reads back from CSV: every real rounded to 10
    /// significant digits.
    pub fn quantized(&self) -> ResultRow {
        let q = |v: Option<f64>| v.map(|x| format_sig10(x).parse::<f64>().expect("formatted real"));
        ResultRow {
            eta: q(self.eta),
            beta: q(self.beta),
            delta: q(self.delta),
            epsilon: q(self.epsilon),
            p_hat: q(self.p_hat),
            ci_low: q(self.ci_low),
            ci_high: q(self.ci_high),
            p_approx: q(self.p_approx),
            ..self.clone()
        }
    }

    pub fn to_csv_line(&self) -> String {
        self.fields().join(",")
    }
}

/// Formats with 10 significant digits, in positional notation for
/// magnitudes in `[1e-5, 1e10)` and scientific notation otherwise.
pub fn format_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..10).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    let body = body.strip_suffix('.').unwrap_or(&body).to_string();
    format!("{sign}{body}")
}

/// Streams rows to a writer; the completion trailer is written by
/// [`finish`](Self::finish).
pub struct CsvSink<W: Write> {
    out: W,
    rows: usize,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut out: W, seed: u64) -> Result<Self> {
        writeln!(out, "# rgg-faultnet v{} seed={seed}", crate::VERSION)?;
        writeln!(out, "{}", COLUMNS.join(","))?;
        out.flush()?;
        Ok(CsvSink { out, rows: 0 })
    }

    pub fn push(&mut self, row: &ResultRow) -> Result<()> {
        writeln!(self.out, "{}", row.to_csv_line())?;
        self.out.flush()?;
        self.rows += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        writeln!(self.out, "{COMPLETE_MARKER}{}", self.rows)?;
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_rows<W: Write>(out: W, seed: u64, rows: &[ResultRow]) -> Result<W> {
    let mut sink = CsvSink::new(out, seed)?;
    for row in rows {
        sink.push(row)?;
    }
    sink.finish()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub version: String,
    pub seed: u64,
    pub rows: Vec<ResultRow>,
    /// Whether the completion trailer was present and matched the row count.
    pub complete: bool,
}

pub fn read_rows(path: impl AsRef<Path>) -> Result<ResultFile> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    parse_rows(reader).map_err(|(line, message)| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    })
}

pub fn parse_rows<R: BufRead>(reader: R) -> std::result::Result<ResultFile, (usize, String)> {
    let mut lines = reader.lines().enumerate();
    let io = |line: usize| move |e: std::io::Error| (line, e.to_string());

    let (_, header) = lines.next().ok_or((1, "empty file".to_string()))?;
    let header = header.map_err(io(1))?;
    let rest = header.strip_prefix("# rgg-faultnet v").ok_or((
        1,
        "missing `# rgg-faultnet v<version> seed=<seed>` header".to_string(),
    ))?;
    let (version, seed) = rest
        .split_once(" seed=")
        .ok_or((1, "header lacks `seed=`".to_string()))?;
    let seed = seed
        .trim()
        .parse::<u64>()
        .map_err(|e| (1, format!("seed: {e}")))?;

    let (_, columns) = lines.next().ok_or((2, "missing column line".to_string()))?;
    if columns.map_err(io(2))? != COLUMNS.join(",") {
        return Err((2, "unexpected column line".into()));
    }

    let mut rows = Vec::new();
    let mut complete = false;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(io(lineno))?;
        if let Some(count) = line.strip_prefix(COMPLETE_MARKER) {
            complete = count.trim().parse::<usize>().ok() == Some(rows.len());
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        complete = false;
        rows.push(parse_line(&line).map_err(|m| (lineno, m))?);
    }
    Ok(ResultFile {
        version: version.to_string(),
        seed,
        rows,
        complete,
    })
}

fn parse_line(line: &str) -> std::result::Result<ResultRow, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(line.as_bytes());
    let record = reader
        .records()
        .next()
        .ok_or("empty record")?
        .map_err(|e| e.to_string())?;
    if record.len() != COLUMNS.len() {
        return Err(format!(
            "expected {} fields, found {}",
            COLUMNS.len(),
            record.len()
        ));
    }
    let field = |i: usize| record.get(i).unwrap_or("");
    let real = |i: usize| -> std::result::Result<Option<f64>, String> {
        match field(i) {
            "" => Ok(None),
            s => s
                .parse()
                .map(Some)
                .map_err(|e| format!("{}: {e}", COLUMNS[i])),
        }
    };
    let int = |i: usize| -> std::result::Result<Option<u64>, String> {
        match field(i) {
            "" => Ok(None),
            s => s
                .parse()
                .map(Some)
                .map_err(|e| format!("{}: {e}", COLUMNS[i])),
        }
    };
    Ok(ResultRow {
        n: field(0).parse().map_err(|e| format!("n: {e}"))?,
        eta: real(1)?,
        beta: real(2)?,
        delta: real(3)?,
        epsilon: real(4)?,
        metric: match field(5) {
            "" => None,
            s => Some(s.parse::<Metric>().map_err(|e| e.to_string())?),
        },
        trials: int(6)?,
        disconnected: int(7)?,
        p_hat: real(8)?,
        ci_low: real(9)?,
        ci_high: real(10)?,
        p_approx: real(11)?,
    })
}
