use std::fs;
use std::path::Path;

use rarenet_core::netlist::{gen_adder, parse_bench_named, parse_expr, AdderArch, Netlist};
use rarenet_core::{Error, Result};

use crate::args::SourceArgs;

/// Output net name given to expression designs.
pub const EXPR_OUTPUT: &str = "X";

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_bench(path: &Path) -> Result<Netlist> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("netlist");
    parse_bench_named(name, &read_file(path)?)
}

fn load_adder(spec: &str) -> Result<Netlist> {
    let (arch, width) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("adder spec `{spec}` is not ARCH:WIDTH")))?;
    let arch: AdderArch = arch.parse()?;
    let width: usize = width
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("adder width `{width}` is not a number")))?;
    gen_adder(arch, width)
}

pub fn load(src: &SourceArgs) -> Result<Netlist> {
    match (&src.netlist, &src.expr, &src.adder) {
        (Some(p), _, _) => load_bench(p),
        (_, Some(e), _) => parse_expr(EXPR_OUTPUT, e),
        (_, _, Some(a)) => load_adder(a),
        _ => Err(Error::InvalidArgument("one of --netlist, --expr, --adder is required".into())),
    }
}

/// `bench:PATH`, `expr:EXPR`, `adder:ARCH:WIDTH`, or a bare BENCH path.
pub fn load_spec(spec: &str) -> Result<Netlist> {
    if let Some(p) = spec.strip_prefix("bench:") {
        load_bench(Path::new(p))
    } else if let Some(e) = spec.strip_prefix("expr:") {
        parse_expr(EXPR_OUTPUT, e)
    } else if let Some(a) = spec.strip_prefix("adder:") {
        load_adder(a)
    } else {
        load_bench(Path::new(spec))
    }
}
