from moquery.harness.cli import main

main()
