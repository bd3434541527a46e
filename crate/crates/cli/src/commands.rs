use std::collections::BTreeMap;
use std::path::Path;

use bayes_core::conjugate::{self, BetaBinomialState, IntervalMethod, NormalMeanState};
use bayes_core::discrete::{self, DiscreteTable, LikelihoodSpec, PairEvent, Point};
use bayes_core::eval::{self, ModelSpec, PosteriorSource, PosteriorSummary, SamplingModel, TestStatistic};
use bayes_core::mcmc::{self, FnTarget, RunSettings};
use bayes_core::models::{self, Functional, GroupCounts, GroupMeans, RegressionData};
use bayes_core::{DrawMatrix, Seed};
use bayes_dsl::{DataSet, SamplerOptions};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::ingest::Table;
use crate::output::{self, num, Report, Rows};
use crate::parse::PriorArg;
use crate::*;

const PILOT_ITERS: usize = 1000;
const PILOT_ROUNDS: usize = 20;

pub fn dispatch(cmd: Command, seed: Seed) -> CliResult<Report> {
    match cmd {
        Command::Discrete(DiscreteCmd::Update(a)) => discrete_update(a, seed),
        Command::Discrete(DiscreteCmd::Grid2p(a)) => grid2p(a),
        Command::Beta(BetaCmd::Update(a)) => beta_update(a),
        Command::Beta(BetaCmd::Select(a)) => beta_select(a),
        Command::Beta(BetaCmd::Interval(a)) => beta_interval(a, seed),
        Command::Beta(BetaCmd::Predict(a)) => beta_predict(a),
        Command::Normal(NormalCmd::Update(a)) => normal_update(a),
        Command::Normal(NormalCmd::Predict(a)) => normal_predict(a, seed),
        Command::Mcmc(McmcCmd::GibbsNormal(a)) => gibbs_normal(a, seed),
        Command::Mcmc(McmcCmd::Metropolis(a)) => metropolis(a, seed),
        Command::Model(ModelCmd::Run(a)) => model_run(a, seed),
        Command::Hier(HierCmd::Props(a)) => hier_props(a, seed),
        Command::Hier(HierCmd::Means(a)) => hier_means(a, seed),
        Command::Reg(RegCmd::Linear(a)) => reg_linear(a, seed),
        Command::Reg(RegCmd::Logistic(a)) => reg_logistic(a, seed),
        Command::Eval(EvalCmd::Bf(a)) => eval_bf(a),
        Command::Eval(EvalCmd::Ppc(a)) => eval_ppc(a, seed),
        Command::Eval(EvalCmd::Sensitivity(a)) => eval_sensitivity(a),
    }
}

fn settings(c: &Chain, seed: Seed) -> CliResult<RunSettings> {
    Ok(match c.burn_in {
        Some(b) => RunSettings::new(c.iters, b, seed)?,
        None => RunSettings::with_default_burn_in(c.iters, seed)?,
    })
}

fn point_cells(p: &Point) -> Vec<String> {
    p.coords().into_iter().map(num).collect()
}

fn point_json(p: &Point) -> serde_json::Value {
    match *p {
        Point::Scalar(x) => json!(x),
        Point::Pair(x, y) => json!([x, y]),
    }
}

fn point_header(dim: usize) -> Vec<&'static str> {
    if dim == 1 {
        vec!["point"]
    } else {
        vec!["point_1", "point_2"]
    }
}

fn discrete_update(a: DiscreteUpdate, seed: Seed) -> CliResult<Report> {
    let prior = match (&a.prior_file, &a.values) {
        (Some(path), _) => {
            let f = std::fs::File::open(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            DiscreteTable::read_csv(f).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?
        }
        (None, Some(values)) => {
            let points = values.iter().map(|v| Point::Scalar(*v)).collect();
            match &a.probs {
                Some(w) => DiscreteTable::from_weights(points, w.0.clone())?,
                None => DiscreteTable::uniform(points)?,
            }
        }
        (None, None) => return Err(CliError::usage("give --values or --prior-file")),
    };

    let observations = if let Some(l) = &a.likelihood {
        if !a.y.is_empty() || a.ybar.is_some() {
            return Err(CliError::usage("--likelihood cannot be combined with --y or --ybar"));
        }
        vec![LikelihoodSpec::table(l.0.clone())?]
    } else if let Some(ybar) = a.ybar {
        if !a.y.is_empty() {
            return Err(CliError::usage("--ybar cannot be combined with --y"));
        }
        let (&[n], Some(sigma)) = (a.n.as_slice(), a.sigma) else {
            return Err(CliError::usage("normal data needs --ybar, one --n and --sigma"));
        };
        vec![LikelihoodSpec::normal_known_sd(ybar, n, sigma)?]
    } else {
        if a.y.is_empty() {
            return Err(CliError::usage("no data: give --y/--n, --ybar/--n/--sigma or --likelihood"));
        }
        if a.y.len() != a.n.len() {
            return Err(CliError::usage(format!("{} --y values but {} --n values", a.y.len(), a.n.len())));
        }
        a.y.iter().zip(&a.n).map(|(y, n)| LikelihoodSpec::binomial(*y, *n)).collect::<Result<_, _>>()?
    };

    let mut post = prior;
    let mut log_evidence = 0.0;
    for obs in &observations {
        let u = discrete::bayes_update_with_evidence(&post, obs)?;
        log_evidence += u.log_evidence;
        post = u.posterior;
    }

    let dim = post.dim();
    let mut header = point_header(dim);
    header.push("prob");
    let mut rows = Rows::new(&header);
    for (p, pr) in post.iter() {
        let mut cells = point_cells(p);
        cells.push(num(pr));
        rows.push(cells);
    }
    let mut r = Report::json();
    r.set("points", post.points().iter().map(point_json).collect::<Vec<_>>())
        .set("probs", post.probs())
        .set("mean", if dim == 1 { json!(post.mean()[0]) } else { json!(post.mean()) })
        .set("log_evidence", log_evidence);
    if let Some(n) = a.sample {
        let draws = discrete::sample_table(&post, n, seed);
        let mut header = vec!["draw_index"];
        header.extend(point_header(dim));
        let mut srows = Rows::new(&header);
        for (i, p) in draws.iter().enumerate() {
            let mut cells = vec![(i + 1).to_string()];
            cells.extend(point_cells(p));
            srows.push(cells);
        }
        r.set("sample", draws.iter().map(point_json).collect::<Vec<_>>());
        rows = srows;
    }
    r.with_rows(rows);
    Ok(r)
}

fn grid2p(a: Grid2p) -> CliResult<Report> {
    let prior = discrete::make_grid_prior(&a.p1_grid, &a.p2_grid, a.diagonal_mass)?;
    let u = discrete::two_proportion_update_with_evidence(&prior, a.y1, a.n1, a.y2, a.n2)?;
    let post = u.posterior;
    let mut rows = Rows::new(&["p1", "p2", "prob"]);
    for (p, pr) in post.iter() {
        let mut cells = point_cells(p);
        cells.push(num(pr));
        rows.push(cells);
    }
    let marginal = |axis: usize| -> CliResult<serde_json::Value> {
        let m = post.marginal(axis)?;
        let values: Vec<f64> = m.points().iter().map(|p| p.coords()[0]).collect();
        Ok(json!({ "values": values, "probs": m.probs() }))
    };
    let mean = post.mean();
    let mut r = Report::json();
    r.set("marginal_p1", marginal(0)?)
        .set("marginal_p2", marginal(1)?)
        .set("mean_p1", mean[0])
        .set("mean_p2", mean[1])
        .set("prob_p1_less", discrete::table_event_prob(&post, |p| PairEvent::FirstLess.holds(p)))
        .set("prob_equal", discrete::table_event_prob(&post, |p| PairEvent::Equal.holds(p)))
        .set("prob_p1_greater", discrete::table_event_prob(&post, |p| PairEvent::FirstGreater.holds(p)))
        .set("log_evidence", u.log_evidence)
        .set(
            "posterior",
            json!({
                "p1": post.points().iter().map(|p| p.coords()[0]).collect::<Vec<_>>(),
                "p2": post.points().iter().map(|p| p.coords()[1]).collect::<Vec<_>>(),
                "prob": post.probs(),
            }),
        );
    r.with_rows(rows);
    Ok(r)
}

fn beta_update(a: BetaUpdate) -> CliResult<Report> {
    let post = conjugate::beta_update(&BetaBinomialState::new(a.a, a.b, a.y, a.n)?);
    let bayes_core::Family::Beta { a: ap, b: bp } = *post.family() else { unreachable!() };
    let mut r = Report::json();
    r.set("a_post", ap).set("b_post", bp);
    Ok(r)
}

fn beta_select(a: BetaSelect) -> CliResult<Report> {
    let d = conjugate::beta_select((a.q1, a.x1), (a.q2, a.x2))?;
    let bayes_core::Family::Beta { a: sa, b: sb } = *d.family() else { unreachable!() };
    let mut r = Report::json();
    r.set("a", sa).set("b", sb).set("achieved_x1", d.quantile(a.q1)?).set("achieved_x2", d.quantile(a.q2)?);
    Ok(r)
}

fn beta_interval(a: BetaInterval, seed: Seed) -> CliResult<Report> {
    let d = bayes_core::Distribution::beta(a.a, a.b)?;
    let method = match a.method {
        IntervalMethodArg::Exact => IntervalMethod::ExactQuantile,
        IntervalMethodArg::Simulation => IntervalMethod::Simulation { draws: a.draws, seed },
    };
    let ci = conjugate::credible_interval(&d, a.level, method)?;
    let mut r = Report::json();
    r.set("lower", ci.lower).set("upper", ci.upper).set("level", ci.level).set("method", ci.method);
    Ok(r)
}

fn beta_predict(a: BetaPredict) -> CliResult<Report> {
    let d = bayes_core::Distribution::beta(a.a, a.b)?;
    let pmf = conjugate::beta_binomial_predictive(&d, a.m)?;
    let mut rows = Rows::new(&["k", "prob"]);
    for (k, p) in pmf.iter().enumerate() {
        rows.push(vec![k.to_string(), num(*p)]);
    }
    let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let mut r = Report::json();
    r.set("m", a.m).set("k", (0..=a.m).collect::<Vec<_>>()).set("prob", &pmf).set("mean", mean);
    r.with_rows(rows);
    Ok(r)
}

fn normal_update(a: NormalUpdate) -> CliResult<Report> {
    let s = NormalMeanState::new(a.m0, a.s0, a.ybar, a.n, a.sigma)?;
    let post = conjugate::normal_update(&s);
    let mut r = Report::json();
    r.set("mean", post.mean())
        .set("sd", post.sd())
        .set("prior_precision", s.prior_precision())
        .set("data_precision", s.data_precision())
        .set("posterior_precision", s.posterior_precision());
    Ok(r)
}

fn normal_predict(a: NormalPredict, seed: Seed) -> CliResult<Report> {
    let pred = conjugate::normal_predictive(a.mean, a.sd, a.sigma)?;
    let mut r = Report::json();
    r.set("mean", pred.mean()).set("sd", pred.sd());
    if let Some(n) = a.draws {
        // composition: theta from the posterior, then y given theta
        let mut rng = seed.rng();
        let post = if a.sd > 0.0 { Some(bayes_core::Distribution::normal(a.mean, a.sd)?) } else { None };
        let mut rows = Rows::new(&["draw_index", "y"]);
        let mut ys = Vec::with_capacity(n);
        for i in 0..n {
            let theta = post.as_ref().map_or(a.mean, |d| d.draw(&mut rng));
            let y = bayes_core::Distribution::normal(theta, a.sigma)?.draw(&mut rng);
            rows.push(vec![(i + 1).to_string(), num(y)]);
            ys.push(y);
        }
        r.set("draws", ys);
        r.with_rows(rows);
    }
    Ok(r)
}

fn gibbs_normal(a: GibbsNormal, seed: Seed) -> CliResult<Report> {
    let ys = Table::read(&a.data)?.numbers(&a.column)?;
    let data = mcmc::NormalModelData::new(ys)?;
    let n = data.len() as f64;
    let mean = data.mean();
    let var = data.values().iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let init = (a.init_mu.unwrap_or(mean), a.init_sigma2.unwrap_or(if var > 0.0 { var } else { 1.0 }));
    let report = mcmc::gibbs_normal(&data, &settings(&a.chain, seed)?, init)?;
    Ok(output::chain_report(&report))
}

fn metropolis(a: Metropolis, seed: Seed) -> CliResult<Report> {
    let d = a.target;
    let target = FnTarget::named(vec!["theta".into()], move |x: &[f64]| d.log_density(x[0]));
    let init = [a.init.unwrap_or_else(|| d.median())];
    let mut scale = vec![a.scale];
    let mut tuning = None;
    if a.tune {
        // pilot runs use their own stream so the main chain keeps the plain seed
        let t = mcmc::tune_scale(&target, &scale, &init, Seed(seed.0 ^ 0x7475_6e65), PILOT_ITERS, PILOT_ROUNDS)?;
        scale = t.scale.clone();
        tuning = Some(t);
    }
    let mut report = mcmc::metropolis_rw(&target, &scale, &settings(&a.chain, seed)?, &init)?;
    if let Some(t) = tuning {
        if !t.converged {
            report.warnings.push(format!("tuning did not reach the target acceptance in {} rounds", t.rounds.len()));
        }
        report.tuning = Some(t);
    }
    Ok(output::chain_report(&report))
}

fn read_dataset(path: &Path) -> CliResult<DataSet> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    let data = if is_json { DataSet::from_json(&text) } else { DataSet::from_csv(text.as_bytes()) };
    data.map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn model_run(a: ModelRun, seed: Seed) -> CliResult<Report> {
    let src = std::fs::read_to_string(&a.script)
        .map_err(|e| CliError::data(format!("{}: {e}", a.script.display())))?;
    let ast = bayes_dsl::parse(&src).map_err(|e| CliError::data(format!("{}: {e}", a.script.display())))?;
    let data = match &a.data {
        Some(p) => read_dataset(p)?,
        None => DataSet::new(),
    };
    let graph = bayes_dsl::compile(&ast, &data).map_err(|e| CliError::data(format!("{}: {e}", a.script.display())))?;
    let names = graph.unknown_names();
    let scales = if a.scale.is_empty() {
        None
    } else {
        let given: BTreeMap<_, _> = a.scale.iter().cloned().collect();
        if let Some(k) = given.keys().find(|k| !names.contains(k)) {
            return Err(CliError::usage(format!("--scale names `{k}`, which is not an unknown of the model")));
        }
        Some(
            names
                .iter()
                .map(|n| given.get(n).copied().ok_or_else(|| CliError::usage(format!("--scale missing for `{n}`"))))
                .collect::<CliResult<Vec<_>>>()?,
        )
    };
    let inits: BTreeMap<String, f64> = a.init.iter().cloned().collect();
    if let Some(k) = inits.keys().find(|k| !names.contains(k)) {
        return Err(CliError::usage(format!("--init names `{k}`, which is not an unknown of the model")));
    }
    let report = bayes_dsl::sample_graph(&graph, &settings(&a.chain, seed)?, &SamplerOptions { scales, inits })?;
    Ok(output::chain_report(&report))
}

fn hier_props(a: HierProps, seed: Seed) -> CliResult<Report> {
    let t = Table::read(&a.data)?;
    t.require(&["group", "y", "n"])?;
    let data = GroupCounts::new(t.text("group")?, t.counts("y")?, t.counts("n")?)?;
    let report =
        models::fit_hierarchical_proportions(&data, &settings(&a.chain, seed)?, [a.eta_scale, a.logk_scale])?;
    Ok(output::chain_report(&report))
}

fn hier_means(a: HierMeans, seed: Seed) -> CliResult<Report> {
    let t = Table::read(&a.data)?;
    t.require(&["group", "ybar", "n"])?;
    let data = GroupMeans::new(t.text("group")?, t.numbers("ybar")?, t.counts("n")?, a.sigma)?;
    let report = models::fit_hierarchical_means(&data, &settings(&a.chain, seed)?, a.scale)?;
    Ok(output::chain_report(&report))
}

fn regression_data(d: &Design) -> CliResult<RegressionData> {
    let t = Table::read(&d.data)?;
    let y = t.numbers(&d.response)?;
    let names: Vec<String> = match &d.covariates {
        Some(c) => c.clone(),
        None => t.headers().iter().filter(|h| **h != d.response).cloned().collect(),
    };
    let covariates = names
        .into_iter()
        .map(|n| {
            let col = t.numbers(&n)?;
            Ok((n, col))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RegressionData::with_intercept(y, covariates)?)
}

fn reg_linear(a: RegLinear, seed: Seed) -> CliResult<Report> {
    let data = regression_data(&a.design)?;
    let mut draws = models::sim_linear_regression(&data, a.draws, seed)?;
    let mut extra = Vec::new();
    if let Some(q) = a.percentile {
        let f = Functional::NormalPercentile { q, location: "intercept".into(), scale: "sigma".into() };
        extra.push(models::posterior_functional(&draws, &f)?);
    }
    if let Some(e) = &a.effect {
        let f = Functional::StandardizedEffect { effect: e.clone(), scale: "sigma".into() };
        extra.push(models::posterior_functional(&draws, &f)?);
    }
    if !extra.is_empty() {
        let mut names = draws.names().to_vec();
        for x in &extra {
            names.extend(x.names().iter().cloned());
        }
        let rows: Vec<Vec<f64>> = (0..draws.nrows())
            .map(|i| {
                let mut row = draws.row(i).to_vec();
                for x in &extra {
                    row.extend_from_slice(x.row(i));
                }
                row
            })
            .collect();
        draws = DrawMatrix::from_rows(names, &rows)?.with_seed(seed);
    }
    let ls = models::least_squares(&data)?;
    let mut r = output::draws_report(&draws);
    let coef: serde_json::Map<String, serde_json::Value> =
        data.names().iter().zip(&ls.coefficients).map(|(n, b)| (n.clone(), json!(b))).collect();
    r.set("least_squares", json!({ "coefficients": coef, "residual_sd": ls.residual_variance.sqrt() }));
    Ok(r)
}

fn reg_logistic(a: RegLogistic, seed: Seed) -> CliResult<Report> {
    let data = regression_data(&a.design)?;
    let warnings = models::separation_warnings(&data);
    let report = models::fit_logistic(&data, &settings(&a.chain, seed)?, a.prior_sd, a.scale.clone().map(|v| v.0))?;
    let mut r = output::chain_report(&report);
    for w in warnings {
        if !r.warnings.contains(&w) {
            r.warnings.push(w);
        }
    }
    Ok(r)
}

fn likelihood(o: &Obs) -> CliResult<LikelihoodSpec> {
    match (o.y, o.n, o.ybar, o.sigma) {
        (Some(y), Some(n), None, None) => Ok(LikelihoodSpec::binomial(y, n)?),
        (None, Some(n), Some(ybar), Some(sigma)) => Ok(LikelihoodSpec::normal_known_sd(ybar, n, sigma)?),
        _ => Err(CliError::usage("give binomial data (--y, --n) or normal data (--ybar, --n, --sigma)")),
    }
}

fn model_spec(p: &PriorArg) -> CliResult<ModelSpec> {
    Ok(match *p {
        PriorArg::Beta(a, b) => ModelSpec::beta(a, b)?,
        PriorArg::Normal(m, s) => ModelSpec::normal(m, s)?,
        PriorArg::Point(v) => ModelSpec::point_mass(v),
    })
}

fn eval_bf(a: EvalBf) -> CliResult<Report> {
    let data = likelihood(&a.obs)?;
    let (m1, m2) = (model_spec(&a.model1)?, model_spec(&a.model2)?);
    let l1 = eval::log_marginal_likelihood(&m1, &data)?;
    let l2 = eval::log_marginal_likelihood(&m2, &data)?;
    let bf = eval::bayes_factor(&m1, &m2, &data)?;
    let mut r = Report::json();
    r.set("model1", &m1.label)
        .set("model2", &m2.label)
        .set("log_marginal_1", l1)
        .set("log_marginal_2", l2)
        .set("marginal_1", l1.exp())
        .set("marginal_2", l2.exp())
        .set("bayes_factor", bf);
    Ok(r)
}

fn read_draws(path: &Path, names: &[String]) -> CliResult<DrawMatrix> {
    let t = Table::read(path)?;
    let cols = names.iter().map(|n| t.numbers(n)).collect::<CliResult<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = (0..t.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(DrawMatrix::from_rows(names.to_vec(), &rows)?)
}

fn eval_ppc(a: EvalPpc, seed: Seed) -> CliResult<Report> {
    let stat = TestStatistic::from_name(&a.stat).ok_or_else(|| {
        CliError::usage(format!("unknown statistic `{}` (expected {})", a.stat, TestStatistic::NAMES.join(", ")))
    })?;
    let t = Table::read(&a.data)?;
    let observed = t.numbers(&a.column)?;
    let model = match a.family {
        FamilyArg::Binomial => {
            let trials = match (&a.trials_column, a.trials) {
                (Some(c), _) => t.counts(c)?,
                (None, Some(m)) => vec![m; observed.len()],
                (None, None) => return Err(CliError::usage("binomial checks need --trials or --trials-column")),
            };
            SamplingModel::Binomial { trials }
        }
        FamilyArg::Normal => SamplingModel::Normal { n: observed.len(), sd: a.sd },
    };
    let posterior = match (a.posterior, &a.draws) {
        (Some(d), _) => PosteriorSource::Distribution(d),
        (None, Some(path)) => {
            if a.params.is_empty() {
                return Err(CliError::usage("--draws needs --params naming the parameter columns"));
            }
            let draws = read_draws(path, &a.params)?;
            let names: Vec<&str> = a.params.iter().map(String::as_str).collect();
            PosteriorSource::from_draws(draws, &names)?
        }
        (None, None) => return Err(CliError::usage("give --posterior or --draws")),
    };
    let res = eval::posterior_predictive_check(&posterior, &model, |ys: &[f64]| stat.eval(ys), &observed, a.replicates, seed)?;
    let mut rows = Rows::new(&["replicate", "t"]);
    for (i, v) in res.t_replicates.iter().enumerate() {
        rows.push(vec![(i + 1).to_string(), num(*v)]);
    }
    let mut r = Report::json();
    r.set("t_observed", res.t_observed).set("t_replicates", &res.t_replicates).set("tail_prob", res.tail_prob);
    r.with_rows(rows);
    Ok(r)
}

fn eval_sensitivity(a: EvalSensitivity) -> CliResult<Report> {
    let data = likelihood(&a.obs)?;
    let base = model_spec(&a.base)?;
    let alts = a.alt.iter().map(model_spec).collect::<CliResult<Vec<_>>>()?;
    let what = match a.summary {
        SummaryArg::Mean => PosteriorSummary::Mean,
        SummaryArg::Lower => PosteriorSummary::Lower(a.level),
        SummaryArg::Upper => PosteriorSummary::Upper(a.level),
        SummaryArg::ProbAbove => PosteriorSummary::ProbAbove(a.threshold),
    };
    let scan = eval::sensitivity_scan(&base, &alts, &data, what)?;
    let mut rows = Rows::new(&["prior", "summary"]);
    for s in &scan {
        rows.push(vec![s.label.clone(), num(s.summary)]);
    }
    let mut r = Report::json();
    r.set("rows", &scan);
    r.with_rows(rows);
    Ok(r)
}
