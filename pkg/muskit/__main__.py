from muskit.main import main

main()
