//! CSV emission with fixed 17-significant-digit formatting, so identical
//! configs produce byte-identical files.

use cylschur_core::error::Error;
use std::fs::File;
use std::io::{BufWriter, Write};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Csv {
    sink: Box<dyn Write>,
}

impl Csv {
    pub fn new(path: Option<&str>) -> Result<Self, Error> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| Error::config(format!("cannot create {p}: {e}")))?,
            )),
            None => Box::new(std::io::stdout()),
        };
        Ok(Csv { sink })
    }

    pub fn comment(&mut self, text: &str) -> Result<(), Error> {
        writeln!(self.sink, "# {text}").map_err(|e| Error::config(e.to_string()))
    }

    pub fn header(&mut self, cols: &[&str]) -> Result<(), Error> {
        writeln!(self.sink, "{}", cols.join(",")).map_err(|e| Error::config(e.to_string()))
    }

    pub fn row(&mut self, cells: &[String]) -> Result<(), Error> {
        writeln!(self.sink, "{}", cells.join(",")).map_err(|e| Error::config(e.to_string()))
    }

    pub fn finish(&mut self) -> Result<(), Error> {
        self.sink.flush().map_err(|e| Error::config(e.to_string()))
    }
}
