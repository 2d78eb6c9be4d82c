"""
Testes para o netbandit

Testes unitários dos modelos, solvers e agentes, e testes de integração do
harness e da CLI. Simulações longas são marcadas como slow.
"""
