# Generated by Django 4.2.23 on 2026-10-17 09:12

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('seed', models.IntegerField(default=0)),
                ('suites', models.CharField(max_length=255)),
                ('tolerance', models.FloatField()),
                ('passed', models.BooleanField(default=False)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='SuiteResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('suite', models.CharField(choices=[('transforms', 'Transforms'), ('minors', 'Minors'), ('degeneracy', 'Degeneracy'), ('dimaps', 'Alternating dimaps'), ('claims', 'Claims'), ('main-theorem', 'Main theorem')], max_length=32)),
                ('status', models.CharField(choices=[('PASS', 'Pass'), ('FAIL', 'Fail'), ('WARN', 'Pass with warning')], max_length=4)),
                ('details', models.TextField(blank=True)),
                ('duration', models.FloatField(default=0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='verification.verificationrun')),
            ],
            options={
                'ordering': ['run', 'id'],
            },
        ),
    ]
