use bbdcqo::hubo::{
    generate, serialize, CoefficientDistribution, InstanceDocument, InstanceSpec, Topology,
};

use crate::args::{GenerateArgs, InstanceShape, TopologyArg};
use crate::error::{CliError, CliResult};
use crate::output::emit;

pub fn spec_from_shape(shape: &InstanceShape, seed: u64) -> CliResult<InstanceSpec> {
    let n = shape
        .n
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let topology = match shape.topology {
        TopologyArg::SparseChain => Topology::SparseChain,
        TopologyArg::Dense => match (shape.n2, shape.n3) {
            (Some(n2), Some(n3)) => Topology::DenseRandom { n2, n3 },
            _ => return Err(CliError::Usage("dense instances need --n2 and --n3".into())),
        },
    };
    let mut distribution = CoefficientDistribution::default();
    if shape.low.is_some() || shape.high.is_some() {
        let CoefficientDistribution::Uniform { low, high } = distribution;
        distribution = CoefficientDistribution::Uniform {
            low: shape.low.unwrap_or(low),
            high: shape.high.unwrap_or(high),
        };
    }
    let spec = InstanceSpec {
        n,
        topology,
        distribution,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn run(args: &GenerateArgs) -> CliResult<()> {
    let spec = spec_from_shape(&args.shape, args.seed)?;
    let problem = generate(&spec)?;
    emit(
        args.out.as_deref(),
        &serialize(&InstanceDocument::generated(problem, &spec)),
    )
}
