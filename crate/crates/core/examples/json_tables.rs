//! Reading a distribution from JSON and writing a table as CSV and JSON.

use eventodist::json::{parse_distribution, ParseOptions};
use eventodist::output::{Cell, Format, OutputTable};
use eventodist::BinomialMv;

const INPUT: &str = r#"{
  "events": ["late", "cancelled"],
  "p": { "": 0.85, "late": 0.1, "late,cancelled": 0.05 }
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let options = ParseOptions {
        lenient: true,
        ..Default::default()
    };
    let law = BinomialMv::new(parse_distribution::<f64>(INPUT, options)?, 2)?;
    let events = law.distribution().events().labels().to_vec();
    let mut table = OutputTable::new(events.iter().cloned().chain(["probability".to_string()]));
    for (cell, p) in law.table()? {
        let mut row: Vec<Cell> = cell.into_iter().map(Cell::Count).collect();
        row.push(Cell::Real(p));
        table.push(row)?;
    }
    let mut out = std::io::stdout().lock();
    table.write(Format::Csv, &mut out)?;
    table.write(Format::Json, &mut out)?;
    Ok(())
}
