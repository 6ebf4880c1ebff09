'''Command-line front end

    svie simulate     one trajectory, "n,t,x" CSV
    svie convergence  strong error table, optional SVG plot
    svie rate         fit the convergence rate of an error table
    svie validate     assumption checks of a builtin problem

Exit codes: 0 success, 2 usage or configuration error, 3 numeric or
validation failure.
'''
import sys
from pathlib import Path

import click
import daiquiri

from . import utils
from .exceptions import ConfigError, SvieError
from .experiment import ErrorTable, estimate_rate, strong_errors
from .plot import render_error_plot
from .problem import BUILTIN_PROBLEMS, get_problem, validate as validate_problem
from .randomness import GridSpec, generate_fine_noise
from .scheme import SCHEMES, simulate as simulate_scheme

log = daiquiri.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _settings(ctx, config, overrides):
    settings = utils.load_config(config, overrides, ctx.obj.get('profile'))
    for scheme_tag in [settings['scheme']] + settings['compare']:
        if scheme_tag not in SCHEMES:
            raise ConfigError(f'unknown scheme {scheme_tag!r} (known: {", ".join(SCHEMES)})', key='scheme')
    # provenance
    click.echo(utils.dump_settings(settings))
    return settings


def _problem(settings):
    return get_problem(settings['problem'], settings['alpha'], settings['beta'], x0=settings['x0'])


problem_option = click.option('--problem', type=click.Choice(sorted(BUILTIN_PROBLEMS)), default=None)
alpha_option = click.option('--alpha', type=float, default=None, help='drift kernel exponent in (0, 0.5)')
beta_option = click.option('--beta', type=float, default=None, help='diffusion kernel exponent in (0, 0.5)')
config_option = click.option('--config', type=click.Path(exists=True, dir_okay=False), default=None,
                             help='JSON run config; flags override its values')


@click.group()
@click.option('--log-level', default=None, help='DEBUG, INFO, WARNING, ...')
@click.option('--log-file', default=None, type=click.Path(dir_okay=False), help='JSON lines log file')
@click.option('--profile', default=utils.profile, help='section of ~/.svie/config')
@click.pass_context
def cli(ctx, log_level, log_file, profile):
    '''Randomized Milstein scheme for singular stochastic Volterra equations'''
    profile_settings = utils.get_config(profile)
    utils.setup_logging(log_level, log_file, profile_settings)
    ctx.obj = {'profile': profile_settings}


@cli.command()
@config_option
@problem_option
@alpha_option
@beta_option
@click.option('--x0', type=float, default=None)
@click.option('--n', 'n', type=int, default=None, help='coarse steps N')
@click.option('--refine', type=int, default=None, help='fine cells per coarse step')
@click.option('--seed', type=int, default=None)
@click.option('--scheme', type=click.Choice(SCHEMES), default=None)
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@click.pass_context
def simulate(ctx, config, **overrides):
    '''Simulate one path and write its trajectory'''
    settings = _settings(ctx, config, overrides)
    problem = _problem(settings)
    grid = GridSpec(problem.horizon, settings['n'], settings['refine'])
    noise = generate_fine_noise(settings['seed'], 0, grid, [grid.coarse_n])
    trajectory = simulate_scheme(problem, grid, noise, settings['scheme'])
    out = settings['out'] or 'traj.csv'
    trajectory.to_csv(out)
    log.info('trajectory written', path=out, scheme=settings['scheme'], terminal=trajectory.terminal)
    return EXIT_OK


def _sibling(path, scheme_tag):
    path = Path(path)
    return str(path.with_name(f'{path.stem}.{scheme_tag}{path.suffix}'))


@cli.command()
@config_option
@problem_option
@alpha_option
@beta_option
@click.option('--x0', type=float, default=None)
@click.option('--levels', default=None, help='comma separated coarse step counts, e.g. 16,32,64,128')
@click.option('--ref', type=int, default=None, help='reference step count')
@click.option('--paths', type=int, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--scheme', type=click.Choice(SCHEMES), default=None)
@click.option('--compare', default=None, help='comma separated baseline schemes')
@click.option('--metric', type=click.Choice(['terminal', 'max']), default=None)
@click.option('--workers', type=int, default=None)
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@click.option('--plot', type=click.Path(dir_okay=False), default=None)
@click.option('--progress/--no-progress', default=False)
@click.pass_context
def convergence(ctx, config, progress, **overrides):
    '''Estimate strong errors across step sizes against a fine reference'''
    settings = _settings(ctx, config, overrides)
    problem = _problem(settings)
    schemes = [settings['scheme']] + [s for s in settings['compare'] if s != settings['scheme']]

    tables = strong_errors(problem, settings['levels'], settings['ref'], settings['paths'], settings['seed'],
                           schemes=schemes, workers=settings['workers'], metric=settings['metric'],
                           progress=progress)

    out = settings['out'] or 'errors.csv'
    main_table = tables[settings['scheme']]
    main_table.to_csv(out)
    for scheme_tag in schemes[1:]:
        tables[scheme_tag].to_csv(_sibling(out, scheme_tag))

    rate = estimate_rate(main_table, settings['alpha'], settings['beta'])
    log.info('convergence done', path=out, slope=rate.slope, theoretical=rate.theoretical)
    if settings['plot']:
        render_error_plot(tables, rate, settings['plot'])
    return EXIT_OK


@cli.command()
@click.option('--in', 'path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--alpha', type=float, required=True)
@click.option('--beta', type=float, required=True)
def rate(path, alpha, beta):
    '''Fit the empirical convergence rate of an error CSV'''
    click.echo(utils.dump_settings(utils.load_config(overrides={'alpha': alpha, 'beta': beta})))
    estimate = estimate_rate(ErrorTable.from_csv(path), alpha, beta)
    for key, value in estimate.as_dict().items():
        click.echo(f'{key}: {value:.6f}')
    return EXIT_OK


@cli.command()
@problem_option
@alpha_option
@beta_option
def validate(problem, alpha, beta):
    '''Check the Lipschitz and C^2 assumptions of a builtin problem'''
    settings = utils.load_config(overrides={'problem': problem, 'alpha': alpha, 'beta': beta})
    click.echo(utils.dump_settings(settings))
    report = validate_problem(_problem(settings))
    for line in report.lines():
        click.echo(line)
    return EXIT_OK if report.passed else EXIT_NUMERIC


def _diagnostic(message):
    lines = str(message).strip().splitlines() or ['unknown error']
    click.echo(f'error: {lines[0]}', err=True)


def run(argv=None):
    '''Run the CLI on ``argv`` and return the exit code'''
    try:
        code = cli.main(args=argv, prog_name='svie', standalone_mode=False)
    except click.exceptions.Exit as done:
        return done.exit_code
    except click.ClickException as error:
        _diagnostic(error.format_message())
        return EXIT_USAGE
    except click.Abort:
        _diagnostic('aborted')
        return EXIT_USAGE
    except ConfigError as error:
        _diagnostic(error)
        return EXIT_USAGE
    except (SvieError, ValueError) as error:
        _diagnostic(error)
        return EXIT_NUMERIC
    return code if isinstance(code, int) else EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))
