"""Management command exposing the experiment runner: ``manage.py conc <subcommand> ...``."""
from django.core.management.base import BaseCommand, CommandError

from core.constants import EXIT_OK
from experiments.services.cli import add_subcommands, execute


class Command(BaseCommand):
    help = 'Run concentration experiments, audits and the selftest on Stiefel and Grassmann manifolds.'

    def add_arguments(self, parser):
        add_subcommands(parser)

    def handle(self, *args, **options):
        subcommand = options.pop('subcommand')
        self.stdout.write(self.style.MIGRATE_HEADING(f'Running {subcommand}...'))
        code = execute(subcommand, options, stdout=self.stdout, stderr=self.stderr)
        if code != EXIT_OK:
            raise CommandError(f'{subcommand} finished with exit code {code}', returncode=code)
        self.stdout.write(self.style.SUCCESS(f'{subcommand} passed'))
